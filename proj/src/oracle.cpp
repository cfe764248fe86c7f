#include "csp/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace csp {

namespace {

void canonicalize(std::vector<int> &order)
{
    const auto it = std::min_element(order.begin(), order.end());
    std::rotate(order.begin(), it, order.end());
    if (order.size() > 2 && order[1] > order.back())
        std::reverse(order.begin() + 1, order.end());
}

}  // namespace

long held_karp(const Instance &inst, const std::vector<int> &subset, std::vector<int> *order)
{
    const int m = static_cast<int>(subset.size());
    if (m < 3)
        throw std::invalid_argument("a cycle needs at least 3 vertices");
    if (m > 20)
        throw OracleRefusal("held_karp limited to 20 vertices");
    const int k = m - 1;
    const std::size_t states = std::size_t{1} << k;
    constexpr long inf = std::numeric_limits<long>::max() / 4;
    std::vector<long> dp(states * static_cast<std::size_t>(k), inf);
    std::vector<int> parent(states * static_cast<std::size_t>(k), -1);
    auto at = [k](std::size_t mask, int j) { return mask * static_cast<std::size_t>(k) + static_cast<std::size_t>(j); };

    for (int j = 0; j < k; ++j)
        dp[at(std::size_t{1} << j, j)] = inst.cost(subset[0], subset[j + 1]);
    for (std::size_t mask = 1; mask < states; ++mask)
        for (int j = 0; j < k; ++j) {
            if (!(mask & (std::size_t{1} << j)))
                continue;
            const long cur = dp[at(mask, j)];
            if (cur >= inf)
                continue;
            for (int l = 0; l < k; ++l) {
                if (mask & (std::size_t{1} << l))
                    continue;
                const std::size_t next = mask | (std::size_t{1} << l);
                const long cand = cur + inst.cost(subset[j + 1], subset[l + 1]);
                if (cand < dp[at(next, l)]) {
                    dp[at(next, l)] = cand;
                    parent[at(next, l)] = j;
                }
            }
        }

    const std::size_t full = states - 1;
    long best = inf;
    int last = -1;
    for (int j = 0; j < k; ++j) {
        const long cand = dp[at(full, j)] + inst.cost(subset[j + 1], subset[0]);
        if (cand < best) {
            best = cand;
            last = j;
        }
    }
    if (order) {
        order->clear();
        std::size_t mask = full;
        for (int j = last; j >= 0;) {
            order->push_back(subset[j + 1]);
            const int p = parent[at(mask, j)];
            mask &= ~(std::size_t{1} << j);
            j = p;
        }
        order->push_back(subset[0]);
        std::reverse(order->begin(), order->end());
        canonicalize(*order);
    }
    return best;
}

long permutation_tsp(const Instance &inst, const std::vector<int> &subset)
{
    if (subset.size() < 3)
        throw std::invalid_argument("a cycle needs at least 3 vertices");
    if (subset.size() > 9)
        throw OracleRefusal("permutation_tsp limited to 9 vertices");
    std::vector<int> rest(subset.begin() + 1, subset.end());
    std::sort(rest.begin(), rest.end());
    long best = std::numeric_limits<long>::max();
    do {
        long c = inst.cost(subset[0], rest.front()) + inst.cost(rest.back(), subset[0]);
        for (std::size_t i = 0; i + 1 < rest.size(); ++i)
            c += inst.cost(rest[i], rest[i + 1]);
        best = std::min(best, c);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

namespace {

std::vector<int> mask_members(unsigned mask, int n)
{
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (mask & (1u << v))
            out.push_back(v);
    return out;
}

bool mask_covers(unsigned mask, const CoverageModel &cov)
{
    VertexSet s(cov.size());
    for (int v = 0; v < cov.size(); ++v)
        if (mask & (1u << v))
            s.insert(v);
    return covers_all(s, cov);
}

}  // namespace

SolveResult brute_force_optimum(const Instance &inst, const CoverageModel &cov, const OracleLimit &limit)
{
    const int n = inst.size();
    if (n > limit.max_n_optimum)
        throw OracleRefusal("brute_force_optimum refuses n = " + std::to_string(n));
    SolveResult out;
    out.lower_bound = kInfinity;
    out.status = SolveStatus::BoundOnly;
    long best = std::numeric_limits<long>::max();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 3 || !mask_covers(mask, cov))
            continue;
        std::vector<int> order;
        const long c = held_karp(inst, mask_members(mask, n), &order);
        if (c < best) {
            best = c;
            out.tour = order;
        }
    }
    if (out.tour.empty())
        return out;
    out.lower_bound = static_cast<double>(best);
    out.upper_bound = static_cast<double>(best);
    out.gap = 0.0;
    out.status = SolveStatus::Optimal;
    return out;
}

void enumerate_feasible_tours(const Instance &inst, const CoverageModel &cov,
                              const std::function<void(const FeasibleTour &)> &visit,
                              const OracleLimit &limit)
{
    const int n = inst.size();
    if (n > limit.max_n_tours)
        throw OracleRefusal("enumerate_feasible_tours refuses n = " + std::to_string(n));
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 3 || !mask_covers(mask, cov))
            continue;
        const std::vector<int> members = mask_members(mask, n);
        std::vector<int> rest(members.begin() + 1, members.end());
        do {
            if (rest.front() > rest.back())
                continue;
            FeasibleTour t;
            t.order.push_back(members[0]);
            t.order.insert(t.order.end(), rest.begin(), rest.end());
            t.x = Eigen::VectorXd::Zero(inst.edge_count());
            t.y = Eigen::VectorXd::Zero(n);
            for (std::size_t i = 0; i < t.order.size(); ++i) {
                t.y[t.order[i]] = 1.0;
                t.x[inst.edge_index(t.order[i], t.order[(i + 1) % t.order.size()])] = 1.0;
            }
            visit(t);
        } while (std::next_permutation(rest.begin(), rest.end()));
    }
}

std::vector<FeasibleTour> feasible_tours(const Instance &inst, const CoverageModel &cov,
                                         const OracleLimit &limit)
{
    std::vector<FeasibleTour> out;
    enumerate_feasible_tours(inst, cov, [&](const FeasibleTour &t) { out.push_back(t); }, limit);
    return out;
}

MinCutResult brute_force_min_cut(const FlowNetwork &net, const OracleLimit &limit)
{
    if (net.real_count() > limit.max_real_cut || net.node_count() > limit.max_nodes_cut)
        throw OracleRefusal("brute_force_min_cut refuses a network this large");
    const int nodes = net.node_count();
    std::vector<int> free;
    for (int v = 0; v < nodes; ++v)
        if (v != net.source() && v != net.sink())
            free.push_back(v);

    MinCutResult best;
    best.value = std::numeric_limits<Capacity>::max();
    std::vector<bool> side(static_cast<std::size_t>(nodes), false);
    for (unsigned mask = 0; mask < (1u << free.size()); ++mask) {
        std::fill(side.begin(), side.end(), false);
        side[net.source()] = true;
        for (std::size_t k = 0; k < free.size(); ++k)
            if (mask & (1u << k))
                side[free[k]] = true;
        const Capacity c = net.cut_capacity(side);
        if (c < best.value) {
            best.value = c;
            best.source_nodes = side;
        }
    }
    best.infinite = best.value >= net.infinity_value();
    best.source_side = VertexSet(net.real_count());
    for (int v = 0; v < net.real_count(); ++v)
        if (best.source_nodes[v])
            best.source_side.insert(v);
    return best;
}

namespace {

// Every vertex of {lb <= x <= ub, rows} is fixed by a set T of tight rows, |T| columns B
// solving them, and the remaining columns at a bound.
class VertexEnumerator {
public:
    explicit VertexEnumerator(const LpModel &model)
        : n_(model.column_count()), m_(model.row_count()), a_(Eigen::MatrixXd::Zero(m_, n_)),
          c_(n_), lb_(n_), ub_(n_), rhs_(m_)
    {
        for (int j = 0; j < n_; ++j) {
            c_[j] = model.cost(j);
            lb_[j] = model.lower(j);
            ub_[j] = model.upper(j);
        }
        for (int i = 0; i < m_; ++i) {
            const SparseRow &r = model.row(i);
            for (std::size_t k = 0; k < r.index.size(); ++k)
                a_(i, r.index[k]) += r.value[k];
            sense_.push_back(r.sense);
            rhs_[i] = r.rhs;
        }
    }

    double run()
    {
        std::vector<int> equalities, optional;
        for (int i = 0; i < m_; ++i) {
            if (sense_[i] != RowSense::Equal)
                optional.push_back(i);
            else if (independent_of(equalities, i))
                equalities.push_back(i);
        }
        const unsigned subsets = 1u << optional.size();
        for (unsigned mask = 0; mask < subsets; ++mask) {
            std::vector<int> tight = equalities;
            for (std::size_t k = 0; k < optional.size(); ++k)
                if (mask & (1u << k))
                    tight.push_back(optional[k]);
            if (static_cast<int>(tight.size()) > n_)
                continue;
            for_each_column_subset(static_cast<int>(tight.size()),
                                   [&](const std::vector<int> &basic) { scan(tight, basic); });
        }
        return best_;
    }

private:
    bool independent_of(const std::vector<int> &rows, int candidate) const
    {
        Eigen::MatrixXd stacked(static_cast<Eigen::Index>(rows.size()) + 1, n_);
        for (std::size_t r = 0; r < rows.size(); ++r)
            stacked.row(static_cast<Eigen::Index>(r)) = a_.row(rows[r]);
        stacked.row(static_cast<Eigen::Index>(rows.size())) = a_.row(candidate);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
        lu.setThreshold(1e-10);
        return lu.rank() == static_cast<Eigen::Index>(rows.size()) + 1;
    }

    template <class F>
    void for_each_column_subset(int t, F &&f)
    {
        std::vector<int> pick(static_cast<std::size_t>(t));
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            f(pick);
            int i = t - 1;
            while (i >= 0 && pick[i] == n_ - t + i)
                --i;
            if (i < 0)
                return;
            ++pick[i];
            for (int j = i + 1; j < t; ++j)
                pick[j] = pick[j - 1] + 1;
        }
    }

    bool feasible(const Eigen::VectorXd &x, const Eigen::VectorXd &act, const std::vector<bool> &tight) const
    {
        for (int j = 0; j < n_; ++j)
            if (x[j] < lb_[j] - kTol || x[j] > ub_[j] + kTol)
                return false;
        for (int i = 0; i < m_; ++i) {
            if (tight[i])
                continue;
            const double tol = kTol * (1.0 + std::abs(rhs_[i]));
            if (sense_[i] == RowSense::Greater && act[i] < rhs_[i] - tol)
                return false;
            if (sense_[i] == RowSense::Less && act[i] > rhs_[i] + tol)
                return false;
            if (sense_[i] == RowSense::Equal && std::abs(act[i] - rhs_[i]) > tol)
                return false;
        }
        return true;
    }

    void scan(const std::vector<int> &tight_rows, const std::vector<int> &basic)
    {
        const int t = static_cast<int>(basic.size());
        std::vector<bool> is_basic(static_cast<std::size_t>(n_), false);
        for (int j : basic)
            is_basic[j] = true;
        std::vector<int> nonbasic;
        for (int j = 0; j < n_; ++j)
            if (!is_basic[j])
                nonbasic.push_back(j);
        std::vector<bool> tight(static_cast<std::size_t>(m_), false);
        for (int i : tight_rows)
            tight[i] = true;

        Eigen::MatrixXd atb(t, t);
        for (int r = 0; r < t; ++r)
            for (int s = 0; s < t; ++s)
                atb(r, s) = a_(tight_rows[r], basic[s]);
        const int k = static_cast<int>(nonbasic.size());
        // x_B = base - m * x_N on the tight rows
        Eigen::VectorXd base = Eigen::VectorXd::Zero(t);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t, k);
        if (t > 0) {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(atb);
            if (!lu.isInvertible())
                return;
            Eigen::VectorXd bt(t);
            Eigen::MatrixXd an(t, k);
            for (int r = 0; r < t; ++r) {
                bt[r] = rhs_[tight_rows[r]];
                for (int q = 0; q < k; ++q)
                    an(r, q) = a_(tight_rows[r], nonbasic[q]);
            }
            base = lu.solve(bt);
            if (k > 0)
                m = lu.solve(an);
        }

        // objective = c_B base + reduced' x_N; skip when no pattern can beat the incumbent
        Eigen::VectorXd cb(t);
        for (int s = 0; s < t; ++s)
            cb[s] = c_[basic[s]];
        const double constant = cb.dot(base);
        Eigen::VectorXd reduced(k);
        double bound = constant;
        for (int q = 0; q < k; ++q) {
            const int j = nonbasic[q];
            reduced[q] = c_[j] - (t > 0 ? cb.dot(m.col(q)) : 0.0);
            bound += std::min(reduced[q] * lb_[j], reduced[q] * ub_[j]);
        }
        if (bound >= best_ - kTol)
            return;

        // walk all bound patterns of x_N in Gray-code order
        Eigen::VectorXd x(n_);
        std::vector<bool> at_upper(static_cast<std::size_t>(k), false);
        for (int q = 0; q < k; ++q)
            x[nonbasic[q]] = lb_[nonbasic[q]];
        Eigen::VectorXd xn(k);
        for (int q = 0; q < k; ++q)
            xn[q] = x[nonbasic[q]];
        Eigen::VectorXd xb = base - (k > 0 ? Eigen::VectorXd(m * xn) : Eigen::VectorXd::Zero(t));
        double objective = constant + reduced.dot(xn);

        const unsigned long patterns = 1ul << k;
        for (unsigned long step = 0; step < patterns; ++step) {
            if (step > 0) {
                const int q = __builtin_ctzl(step);
                const int j = nonbasic[q];
                const double delta = at_upper[q] ? lb_[j] - ub_[j] : ub_[j] - lb_[j];
                at_upper[q] = !at_upper[q];
                x[j] += delta;
                if (t > 0)
                    xb -= m.col(q) * delta;
                objective += reduced[q] * delta;
            }
            if (objective >= best_ - kTol)
                continue;
            bool inside = true;
            for (int s = 0; s < t && inside; ++s)
                inside = xb[s] >= lb_[basic[s]] - kTol && xb[s] <= ub_[basic[s]] + kTol;
            if (!inside)
                continue;
            for (int s = 0; s < t; ++s)
                x[basic[s]] = xb[s];
            if (feasible(x, a_ * x, tight))
                best_ = std::min(best_, c_.dot(x));
        }
    }

    static constexpr double kTol = 1e-7;

    int n_, m_;
    Eigen::MatrixXd a_;
    Eigen::VectorXd c_, lb_, ub_, rhs_;
    std::vector<RowSense> sense_;
    double best_ = kInfinity;
};

}  // namespace

double lp_vertex_enumeration(const LpModel &model, const OracleLimit &limit)
{
    if (model.column_count() > limit.max_lp_columns || model.row_count() > limit.max_lp_rows)
        throw OracleRefusal("lp_vertex_enumeration refuses a model this large");
    for (int j = 0; j < model.column_count(); ++j)
        if (!std::isfinite(model.lower(j)) || !std::isfinite(model.upper(j)))
            throw std::invalid_argument("vertex enumeration needs boxed columns");
    return VertexEnumerator(model).run();
}

}  // namespace csp
