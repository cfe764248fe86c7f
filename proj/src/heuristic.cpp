#include "csp/heuristic.hpp"

#include <algorithm>
#include <limits>

namespace csp {

long tour_cost(const Instance &inst, const std::vector<int> &order)
{
    long total = 0;
    const std::size_t m = order.size();
    for (std::size_t i = 0; i < m; ++i)
        total += inst.cost(order[i], order[(i + 1) % m]);
    return total;
}

bool is_feasible_tour(const Instance &inst, const CoverageModel &cov, const std::vector<int> &order)
{
    const int n = inst.size();
    if (order.size() < 3)
        return false;
    VertexSet seen(n);
    for (int v : order) {
        if (v < 0 || v >= n || seen.contains(v))
            return false;
        seen.insert(v);
    }
    for (int u = 0; u < n; ++u)
        if (!cov.cover_of(u).intersects(seen))
            return false;
    return true;
}

namespace {

std::vector<int> greedy_cover(const Instance &inst, const CoverageModel &cov, std::mt19937_64 &rng,
                              bool perturb, const Eigen::VectorXd *guide)
{
    const int n = inst.size();
    std::uniform_real_distribution<double> noise(0.0, 0.5);
    std::vector<double> weight(static_cast<std::size_t>(n), 1.0);
    for (int v = 0; v < n; ++v) {
        if (guide)
            weight[v] *= 1.5 - std::clamp((*guide)[v], 0.0, 1.0);
        if (perturb)
            weight[v] *= 1.0 + noise(rng);
    }

    VertexSet uncovered = VertexSet::full(n);
    VertexSet chosen(n);
    std::vector<int> out;
    while (!uncovered.empty()) {
        int best = -1;
        double best_score = 0.0;
        for (int v = 0; v < n; ++v) {
            if (chosen.contains(v))
                continue;
            const int gain = (cov.covers(v) & uncovered).size();
            const double score = gain / weight[v];
            if (gain > 0 && score > best_score) {
                best = v;
                best_score = score;
            }
        }
        chosen.insert(best);
        out.push_back(best);
        uncovered -= cov.covers(best);
    }
    while (static_cast<int>(out.size()) < 3) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            if (chosen.contains(v))
                continue;
            for (int s : out)
                if (inst.distance(s, v) < best_d) {
                    best_d = inst.distance(s, v);
                    best = v;
                }
        }
        chosen.insert(best);
        out.push_back(best);
    }
    return out;
}

std::vector<int> nearest_neighbour(const Instance &inst, std::vector<int> pool, std::size_t start)
{
    std::vector<int> order;
    order.reserve(pool.size());
    std::swap(pool[0], pool[start]);
    order.push_back(pool[0]);
    pool.erase(pool.begin());
    while (!pool.empty()) {
        const int last = order.back();
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (inst.cost(last, pool[i]) < inst.cost(last, pool[best]))
                best = i;
        order.push_back(pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return order;
}

bool two_opt(const Instance &inst, std::vector<int> &t)
{
    const std::size_t m = t.size();
    bool any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 2 < m; ++i)
            for (std::size_t j = i + 2; j < m; ++j) {
                if (i == 0 && j == m - 1)
                    continue;
                const int a = t[i], b = t[i + 1], c = t[j], d = t[(j + 1) % m];
                const long delta = inst.cost(a, c) + inst.cost(b, d) - inst.cost(a, b) - inst.cost(c, d);
                if (delta < 0) {
                    std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                 t.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    improved = any = true;
                }
            }
    }
    return any;
}

class CoverCount {
public:
    CoverCount(const CoverageModel &cov, const std::vector<int> &tour)
        : cov_(cov), count_(static_cast<std::size_t>(cov.size()), 0)
    {
        for (int t : tour)
            add(t);
    }

    void add(int t) { cov_.covers(t).for_each([&](int u) { ++count_[u]; }); }
    void remove(int t) { cov_.covers(t).for_each([&](int u) { --count_[u]; }); }

    bool removable(int t, int replacement = -1) const
    {
        bool ok = true;
        cov_.covers(t).for_each([&](int u) {
            if (count_[u] < 2 && !(replacement >= 0 && cov_.covers(replacement).contains(u)))
                ok = false;
        });
        return ok;
    }

private:
    const CoverageModel &cov_;
    std::vector<int> count_;
};

bool drop_pass(const Instance &inst, CoverCount &cc, std::vector<int> &t)
{
    bool any = false;
    for (std::size_t i = 0; i < t.size() && t.size() > 3;) {
        const std::size_t m = t.size();
        const int p = t[(i + m - 1) % m], v = t[i], q = t[(i + 1) % m];
        const long gain = inst.cost(p, v) + inst.cost(v, q) - inst.cost(p, q);
        if (gain > 0 && cc.removable(v)) {
            cc.remove(v);
            t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
            any = true;
        } else {
            ++i;
        }
    }
    return any;
}

bool swap_pass(const Instance &inst, CoverCount &cc, std::vector<int> &t)
{
    const int n = inst.size();
    bool any = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::size_t m = t.size();
        const int p = t[(i + m - 1) % m], v = t[i], q = t[(i + 1) % m];
        const long gain = inst.cost(p, v) + inst.cost(v, q) - inst.cost(p, q);
        VertexSet in_tour(n);
        for (int x : t)
            in_tour.insert(x);

        int best_w = -1;
        std::size_t best_pos = 0;
        long best_delta = 0;
        for (int w = 0; w < n; ++w) {
            if (in_tour.contains(w) || !cc.removable(v, w))
                continue;
            // cheapest insertion of w into the tour with v removed
            for (std::size_t k = 0; k < m; ++k) {
                if (k == i)
                    continue;
                int a = t[k], b = t[(k + 1) % m];
                if (a == v)
                    continue;
                if (b == v)
                    b = q;
                const long delta = inst.cost(a, w) + inst.cost(w, b) - inst.cost(a, b) - gain;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_w = w;
                    best_pos = k;
                }
            }
        }
        if (best_w >= 0) {
            const int after = t[best_pos];
            cc.remove(v);
            cc.add(best_w);
            t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
            const auto it = std::find(t.begin(), t.end(), after);
            t.insert(it + 1, best_w);
            any = true;
        }
    }
    return any;
}

}  // namespace

void improve_tour(const Instance &inst, const CoverageModel &cov, Tour &tour)
{
    std::vector<int> &t = tour.order;
    CoverCount cc(cov, t);
    bool improved = true;
    while (improved) {
        improved = false;
        if (t.size() >= 4)
            improved |= two_opt(inst, t);
        improved |= drop_pass(inst, cc, t);
        improved |= swap_pass(inst, cc, t);
    }
    tour.cost = tour_cost(inst, t);
}

Tour primal_heuristic(const Instance &inst, const CoverageModel &cov, std::mt19937_64 &rng,
                      const HeuristicOptions &options)
{
    if (inst.size() < 3)
        throw std::invalid_argument("a tour needs at least 3 vertices");
    Tour best;
    best.cost = std::numeric_limits<long>::max();
    for (int s = 0; s < std::max(1, options.starts); ++s) {
        const std::vector<int> chosen = greedy_cover(inst, cov, rng, s > 0, options.guide);
        std::size_t start = 0;
        if (s > 0)
            start = std::uniform_int_distribution<std::size_t>(0, chosen.size() - 1)(rng);
        Tour t{nearest_neighbour(inst, chosen, start), 0};
        improve_tour(inst, cov, t);
        if (t.cost < best.cost)
            best = std::move(t);
    }
    return best;
}

}  // namespace csp
