#include "csp/separation.hpp"

#include "csp/flow.hpp"

#include <chrono>
#include <cmath>
#include <unordered_set>

namespace csp {

namespace {

class Collector {
public:
    Collector(const SupportGraph &g, double threshold) : g_(g), threshold_(threshold) {}

    bool offer(const Cut &cut)
    {
        const double viol = cut.violation(g_);
        if (!(viol > threshold_))
            return false;
        if (!keys_.insert(cut.key()).second)
            return false;
        out_.cuts.push_back(cut);
        out_.violations.push_back(viol);
        ++out_.stats.by_kind[static_cast<std::size_t>(cut.kind())];
        return true;
    }

    SeparationOutcome &outcome() { return out_; }

private:
    const SupportGraph &g_;
    double threshold_;
    SeparationOutcome out_;
    std::unordered_set<CutKey, CutKeyHash> keys_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_even_degrees(const SupportGraph &g)
{
    std::vector<double> deg(static_cast<std::size_t>(g.size()), 0.0);
    for (const auto &e : g.edges()) {
        deg[e.u] += e.x;
        deg[e.v] += e.x;
    }
    for (int v = 0; v < g.size(); ++v)
        if (std::lround(deg[v]) % 2 != 0)
            throw MalformedPointError("vertex " + std::to_string(v) + " has odd degree");
}

}  // namespace

SeparationOutcome separate_integer(const SupportGraph &gi, const CoverageModel &cov,
                                   const SeparationOptions &options)
{
    const auto t0 = Clock::now();
    check_even_degrees(gi);
    Collector col(gi, kMinViolation);
    const std::vector<VertexSet> cycles = gi.components();
    const int n = gi.size();

    if (cycles.size() > 1) {
        const VertexSet &tour = gi.vertices();
        for (std::size_t c = 0; c < cycles.size(); ++c) {
            const VertexSet &s = cycles[c];
            if (!covers_all(s, cov)) {
                if (in_gamma(s, cov))
                    col.offer(Cut::gamma(s, cov));
                else
                    col.offer(Cut::vertex(s, gi.argmax_y(s), cov));

                const VertexSet others = tour - s;
                s.for_each([&](int v) {
                    const VertexSet aug = s | cov.cover_of(v);
                    if (aug.intersects(others) || aug.is_full())
                        return;
                    if (!covers_all(aug, cov)) {
                        col.offer(Cut::gamma(aug, cov));
                        return;
                    }
                    if (!options.cover_intersection)
                        return;
                    for (int u = 0; u < n; ++u) {
                        const VertexSet su = s & cov.cover_of(u);
                        bool crossed = false;
                        if (!su.empty())
                            for (const auto &e : gi.edges())
                                if (su.contains(e.u) != su.contains(e.v)) {
                                    crossed = true;
                                    break;
                                }
                        if (!crossed && Cut::cover_intersection_valid(aug, u, cov))
                            col.offer(Cut::cover_intersection(aug, u, cov));
                    }
                });
            } else {
                const int i = gi.argmax_y(s);
                for (std::size_t d = 0; d < cycles.size(); ++d)
                    if (d != c)
                        col.offer(Cut::link(s, i, gi.argmax_y(cycles[d])));
            }
        }
    }
    col.outcome().stats.seconds = seconds_since(t0);
    return std::move(col.outcome());
}

SeparationOutcome separate_fractional_exact(const SupportGraph &gf, const CoverageModel &cov,
                                            const SeparationOptions &options)
{
    const auto t0 = Clock::now();
    const double threshold = options.first_found ? options.epsilon : kMinViolation;
    Collector col(gf, threshold);
    SeparationOutcome &out = col.outcome();
    const int n = gf.size();

    std::vector<bool> cover_full(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        cover_full[v] = covers_all(cov.cover_of(v), cov);

    auto min_cut = [&](const FlowNetwork &net) {
        ++out.stats.flow_calls;
        return max_flow_min_cut(net);
    };
    auto offer_gamma_either_side = [&](const VertexSet &s) {
        if (s.empty() || s.is_full())
            return false;
        if (in_gamma(s, cov) && !covers_all(s, cov))
            return col.offer(Cut::gamma(s, cov));
        const VertexSet t = s.complement();
        if (in_gamma(t, cov) && !covers_all(t, cov))
            return col.offer(Cut::gamma(t, cov));
        return false;
    };
    auto done = [&] { return options.first_found && !out.cuts.empty(); };

    for (int v = 0; v < n && !done(); ++v) {
        const VertexSet &cv = cov.cover_of(v);
        for (int u = 0; u < n && !done(); ++u) {
            if (u == v)
                continue;
            const VertexSet &cu = cov.cover_of(u);
            const bool disjoint = !cv.intersects(cu);

            if (!cover_full[v] && disjoint) {
                const MinCutResult r = min_cut(build_cut_network(gf, cv, cu));
                if (!r.infinite)
                    offer_gamma_either_side(r.source_side);
            } else if (options.cover_intersection) {
                const MinCutResult r = min_cut(augment_for_ci(gf, cv, cu));
                if (!r.infinite && Cut::cover_intersection_valid(r.source_side, u, cov))
                    col.offer(Cut::cover_intersection(r.source_side, u, cov));
            }
            if (done())
                break;

            if (gf.y(v) > SupportGraph::kZero && !cu.contains(v)) {
                const MinCutResult r = min_cut(build_cut_network(gf, VertexSet::of(n, {v}), cu));
                if (!r.infinite) {
                    const VertexSet &s = r.source_side;
                    if (!in_gamma(s, cov) && !covers_all(s, cov))
                        col.offer(Cut::vertex(s, v, cov));
                    else
                        offer_gamma_either_side(s);
                }
            }
            if (done())
                break;

            if (gf.y(v) + gf.y(u) > 1.0) {
                const MinCutResult r = min_cut(
                    build_cut_network(gf, VertexSet::of(n, {v}), VertexSet::of(n, {u})));
                if (!r.infinite)
                    col.offer(Cut::link(r.source_side, v, u));
            }
        }
    }
    out.stats.seconds = seconds_since(t0);
    return std::move(out);
}

SeparationOutcome separate_fractional_heuristic(const SupportGraph &gf, const CoverageModel &cov,
                                                const SeparationOptions &options)
{
    const auto t0 = Clock::now();
    Collector col(gf, kMinViolation);
    const int n = gf.size();

    auto try_ci = [&](const VertexSet &s, int v) {
        if (options.cover_intersection && Cut::cover_intersection_valid(s, v, cov))
            col.offer(Cut::cover_intersection(s, v, cov));
    };

    for (int u = 0; u < n; ++u) {
        const VertexSet &s = cov.cover_of(u);
        if (s.is_full())
            continue;
        const double w = gf.cut_weight(s);
        if (!covers_all(s, cov)) {
            if (w < 2.0)
                col.offer(Cut::gamma(s, cov));
        } else if (options.cover_intersection && w < 2.0) {
            for (int v = 0; v < n; ++v)
                if (v != u && w + gf.cut_weight_outside(s & cov.cover_of(v), s) < 2.0)
                    try_ci(s, v);
        }
    }

    const std::vector<VertexSet> comps = gf.components();
    for (const VertexSet &s : comps) {
        if (s.is_full())
            continue;
        const bool dominating = covers_all(s, cov);
        if (in_gamma(s, cov)) {
            if (!dominating)
                col.offer(Cut::gamma(s, cov));
            else if (options.cover_intersection)
                for (int v = 0; v < n; ++v)
                    if (gf.cut_weight_outside(s & cov.cover_of(v), s) < 2.0)
                        try_ci(s, v);
        } else if (!dominating) {
            col.offer(Cut::vertex(s, gf.argmax_y(s), cov));
        }
    }

    for (std::size_t k = 0; k < comps.size(); ++k)
        for (std::size_t l = 0; l < comps.size(); ++l) {
            if (k == l)
                continue;
            const int i = gf.argmax_y(comps[k]);
            const int j = gf.argmax_y(comps[l]);
            if (gf.y(i) + gf.y(j) > 1.0)
                col.offer(Cut::link(comps[k], i, j));
        }

    col.outcome().stats.seconds = seconds_since(t0);
    return std::move(col.outcome());
}

}  // namespace csp
