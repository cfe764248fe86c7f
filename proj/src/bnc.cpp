#include "csp/bnc.hpp"

#include "csp/formulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace csp {

const char *to_string(Mode mode)
{
    switch (mode) {
    case Mode::I: return "I";
    case Mode::IFvp: return "IFvp";
    case Mode::IFvpX: return "IFvpX";
    case Mode::IFh: return "IFh";
    case Mode::IFhX: return "IFhX";
    }
    return "?";
}

Mode parse_mode(const std::string &text)
{
    for (auto m : {Mode::I, Mode::IFvp, Mode::IFvpX, Mode::IFh, Mode::IFhX})
        if (text == to_string(m))
            return m;
    throw std::invalid_argument("unknown mode '" + text + "'");
}

bool uses_cover_intersection(Mode mode)
{
    return mode == Mode::IFvpX || mode == Mode::IFhX;
}

const char *to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::BoundOnly: return "bound-only";
    case SolveStatus::TimeoutNoIncumbent: return "timeout-no-incumbent";
    }
    return "?";
}

double optimality_gap(double lb, std::optional<double> ub)
{
    if (!ub)
        return 100.0;
    if (*ub <= lb)
        return 0.0;
    if (*ub <= 0.0)
        return 100.0;
    return (*ub - lb) / *ub * 100.0;
}

int branching_column(const Instance &inst, const CoverageModel &cov, const Eigen::VectorXd &values,
                     double tol)
{
    const VariableLayout lay(inst);
    auto fractional = [&](double v) { return std::abs(v - std::round(v)) > tol; };
    constexpr double kTie = 1e-9;

    int best = -1;
    double best_dist = 0.0;
    for (int v = 0; v < lay.vertices; ++v) {
        const double y = values[lay.y(v)];
        if (!fractional(y))
            continue;
        const double dist = std::abs(y - 0.5);
        if (best < 0 || dist < best_dist - kTie ||
            (dist <= best_dist + kTie && cov.covers(v).size() > cov.covers(best).size())) {
            best = v;
            best_dist = dist;
        }
    }
    if (best >= 0)
        return lay.y(best);

    for (int e = 0; e < lay.edges; ++e) {
        const double x = values[lay.x(e)];
        if (!fractional(x))
            continue;
        const double dist = std::abs(x - 0.5);
        if (best < 0 || dist < best_dist - kTie) {
            best = e;
            best_dist = dist;
        }
    }
    return best < 0 ? -1 : lay.x(best);
}

std::array<SearchNode, 2> branch(const Instance &inst, const CoverageModel &cov,
                                 const SearchNode &node, const LpSolution &solution)
{
    const int col = branching_column(inst, cov, solution.values);
    if (col < 0)
        throw std::logic_error("branch called on an integral solution");
    std::array<SearchNode, 2> kids;
    for (int k = 0; k < 2; ++k) {
        kids[k].fixings = node.fixings;
        kids[k].fixings.push_back({col, k == 0 ? 1.0 : 0.0});
        kids[k].bound = std::max(node.bound, solution.objective);
        kids[k].depth = node.depth + 1;
    }
    return kids;
}

std::vector<int> extract_tour(const SupportGraph &g)
{
    const VertexSet &verts = g.vertices();
    if (verts.empty() || g.components().size() != 1)
        return {};
    const auto &inc = g.incident();
    std::vector<int> order{verts.first()};
    int prev = -1;
    int cur = order.front();
    while (true) {
        int next = -1;
        for (int ei : inc[cur]) {
            const auto &e = g.edges()[ei];
            const int w = e.u == cur ? e.v : e.u;
            if (w != prev && e.x > 0.5) {
                next = w;
                break;
            }
        }
        if (next < 0 || next == order.front())
            break;
        if (static_cast<int>(order.size()) > verts.size())
            return {};
        order.push_back(next);
        prev = cur;
        cur = next;
    }
    if (static_cast<int>(order.size()) != verts.size())
        return {};
    return order;
}

namespace {

using Clock = std::chrono::steady_clock;

class RunLog {
public:
    RunLog()
    {
        const char *env = std::getenv("CSP_LOG");
        const std::string v = env ? env : "off";
        level_ = v == "debug" ? 2 : v == "info" ? 1 : 0;
    }

    bool info() const { return level_ >= 1; }
    bool debug() const { return level_ >= 2; }

    template <class... Args>
    void line(Args &&...args) const
    {
        (std::clog << ... << args) << '\n';
    }

private:
    int level_ = 0;
};

constexpr double kIntegrality = 1e-6;
constexpr int kInactiveLimit = 10;

enum class NodeOutcome { Pruned, Branched, Timeout };

class BranchAndCut {
public:
    BranchAndCut(const Instance &inst, const CoverageModel &cov, const SolverConfig &cfg)
        : inst_(inst), cov_(cov), cfg_(cfg), lay_(inst), model_(build_root_model(inst, cov)),
          rng_(cfg.seed), start_(Clock::now())
    {
        for (int r = 0; r < model_.row_count(); ++r) {
            row_id_.push_back(next_row_id_++);
            row_pool_.push_back(-1);
            inactive_.push_back(0);
        }
        for (int j = 0; j < model_.column_count(); ++j) {
            global_lo_.push_back(model_.lower(j));
            global_up_.push_back(model_.upper(j));
        }
        fixed_zero_edge_.assign(static_cast<std::size_t>(lay_.edges), false);
    }

    SolveResult run()
    {
        HeuristicOptions hopt;
        hopt.starts = cfg_.heuristic_starts;
        const Tour first = primal_heuristic(inst_, cov_, rng_, hopt);
        stats_.heuristic_ub = static_cast<double>(first.cost);
        offer_tour(first.order, "heuristic");

        std::vector<SearchNode> open;
        SearchNode root;
        root.id = next_node_id_++;
        root.bound = -kInfinity;

        auto cmp = [](const SearchNode &a, const SearchNode &b) {
            return a.bound > b.bound || (a.bound == b.bound && a.id > b.id);
        };

        bool timed_out = false;
        double timeout_bound = kInfinity;
        std::vector<SearchNode> pending{std::move(root)};
        while (true) {
            for (auto &node : pending) {
                open.push_back(std::move(node));
                std::push_heap(open.begin(), open.end(), cmp);
            }
            pending.clear();
            if (open.empty())
                break;
            std::pop_heap(open.begin(), open.end(), cmp);
            SearchNode node = std::move(open.back());
            open.pop_back();
            if (prunable(node.bound))
                continue;
            if (time_up()) {
                timed_out = true;
                timeout_bound = node.bound;
                break;
            }
            ++stats_.nodes;
            if (log_.info())
                log_.line("node id=", node.id, " depth=", node.depth, " bound=", node.bound,
                          " open=", open.size());
            std::array<SearchNode, 2> kids;
            const NodeOutcome res = process(node, kids);
            if (res == NodeOutcome::Timeout) {
                timed_out = true;
                timeout_bound = node.bound;
                break;
            }
            if (res == NodeOutcome::Branched)
                for (auto &k : kids) {
                    k.id = next_node_id_++;
                    pending.push_back(std::move(k));
                }
        }

        SolveResult out;
        stats_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        if (!best_tour_.empty()) {
            out.upper_bound = ub_;
            out.tour = best_tour_;
        }
        if (!timed_out) {
            out.lower_bound = best_tour_.empty() ? stats_.root_bound : ub_;
            out.status = best_tour_.empty() ? SolveStatus::BoundOnly : SolveStatus::Optimal;
        } else {
            double lb = timeout_bound;
            for (const auto &n : open)
                lb = std::min(lb, n.bound);
            lb = std::max(lb, stats_.root_bound);
            lb = std::ceil(lb - kIntegrality);
            if (!best_tour_.empty())
                lb = std::min(lb, ub_);
            out.lower_bound = lb;
            out.status = best_tour_.empty() ? SolveStatus::TimeoutNoIncumbent : SolveStatus::Feasible;
        }
        if (out.status == SolveStatus::Feasible && out.lower_bound >= ub_)
            out.status = SolveStatus::Optimal;
        out.gap = optimality_gap(out.lower_bound, out.upper_bound);
        out.stats = stats_;
        return out;
    }

private:
    bool time_up() const
    {
        return std::chrono::duration<double>(Clock::now() - start_).count() > cfg_.time_limit;
    }

    bool prunable(double bound) const
    {
        return !best_tour_.empty() && std::ceil(bound - kIntegrality) >= ub_;
    }

    void offer_tour(const std::vector<int> &order, const char *source)
    {
        if (!is_feasible_tour(inst_, cov_, order))
            throw std::logic_error("infeasible incumbent candidate");
        const double cost = static_cast<double>(tour_cost(inst_, order));
        if (!best_tour_.empty() && cost >= ub_)
            return;
        ub_ = cost;
        best_tour_ = order;
        if (log_.info())
            log_.line("incumbent ub=", ub_, " source=", source, " size=", order.size());
        if (have_root_duals_)
            fix_by_reduced_cost();
    }

    void apply_bounds(const SearchNode &node)
    {
        for (int j = 0; j < model_.column_count(); ++j)
            model_.set_bounds(j, global_lo_[j], global_up_[j]);
        for (const auto &f : node.fixings) {
            const double lo = std::max(global_lo_[f.column], f.value);
            const double up = std::min(global_up_[f.column], f.value);
            model_.set_bounds(f.column, lo, std::max(lo, up));
        }
    }

    bool bounds_conflict(const SearchNode &node) const
    {
        for (const auto &f : node.fixings)
            if (f.value < global_lo_[f.column] || f.value > global_up_[f.column])
                return true;
        return false;
    }

    // last optimal basis, extended by the rows appended since
    Basis fallback() const
    {
        Basis b = last_basis_;
        if (!b.empty())
            while (static_cast<int>(b.rows.size()) < model_.row_count())
                b.rows.push_back(VarStatus::Basic);
        return b;
    }

    Basis restore(const BasisSnapshot &snap) const
    {
        if (snap.columns.empty())
            return fallback();
        std::unordered_map<long, VarStatus> by_id(snap.rows.begin(), snap.rows.end());
        Basis b;
        b.columns = snap.columns;
        int basic = 0;
        for (auto s : b.columns)
            basic += s == VarStatus::Basic;
        for (long id : row_id_) {
            const auto it = by_id.find(id);
            const VarStatus s = it == by_id.end() ? VarStatus::Basic : it->second;
            b.rows.push_back(s);
            basic += s == VarStatus::Basic;
        }
        if (basic != model_.row_count())
            return fallback();
        return b;
    }

    BasisSnapshot snapshot(const Basis &b) const
    {
        BasisSnapshot s;
        s.columns = b.columns;
        for (std::size_t r = 0; r < b.rows.size(); ++r)
            s.rows.emplace_back(row_id_[r], b.rows[r]);
        return s;
    }

    LpSolution solve_current(const Basis &warm)
    {
        LpSolution sol = solve_lp(model_, warm.empty() ? nullptr : &warm);
        ++stats_.lp_solves;
        stats_.lp_iterations += sol.iterations;
        if (sol.status == LpStatus::Optimal)
            last_basis_ = sol.basis;
        return sol;
    }

    // drops cut rows whose logical has been basic for kInactiveLimit solves in a row
    void purge_rows(LpSolution &sol)
    {
        std::vector<int> drop;
        for (int r = 0; r < model_.row_count(); ++r) {
            if (row_pool_[r] < 0)
                continue;
            if (sol.basis.rows[r] == VarStatus::Basic)
                ++inactive_[r];
            else
                inactive_[r] = 0;
            if (inactive_[r] >= kInactiveLimit && sol.basis.rows[r] == VarStatus::Basic)
                drop.push_back(r);
        }
        if (drop.empty())
            return;
        model_.remove_rows(drop);
        std::vector<bool> gone(row_id_.size(), false);
        for (int r : drop) {
            gone[r] = true;
            pool_in_lp_[row_pool_[r]] = 0;
        }
        auto keep = [&](auto &v) {
            std::size_t w = 0;
            for (std::size_t r = 0; r < v.size(); ++r)
                if (!gone[r])
                    v[w++] = v[r];
            v.resize(w);
        };
        keep(row_id_);
        keep(row_pool_);
        keep(inactive_);
        keep(sol.basis.rows);
        last_basis_ = sol.basis;
    }

    int cap() const
    {
        return cfg_.cuts_per_round > 0 ? cfg_.cuts_per_round : 2 * inst_.size();
    }

    int add_cuts(const SeparationOutcome &outcome, Basis &warm)
    {
        std::vector<std::size_t> order(outcome.cuts.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return outcome.violations[a] > outcome.violations[b];
        });
        if (static_cast<int>(order.size()) > cap())
            order.resize(static_cast<std::size_t>(cap()));
        std::vector<int> idx;
        for (std::size_t k : order) {
            const Cut &cut = outcome.cuts[k];
            int p = pool_.find(cut);
            if (p < 0) {
                p = pool_.add(cut);
                pool_in_lp_.push_back(0);
                ++stats_.cuts[static_cast<std::size_t>(cut.kind())];
            }
            idx.push_back(p);
        }
        return add_pool_rows(idx, warm);
    }

    int add_pool_rows(const std::vector<int> &pool_idx, Basis &warm)
    {
        int added = 0;
        std::array<int, 5> by_kind{};
        for (int p : pool_idx) {
            if (pool_in_lp_[p])
                continue;
            const Cut &cut = pool_[p];
            if (model_.add_row(cut.to_lp_row(inst_, &fixed_zero_edge_, true)) < 0)
                continue;
            row_id_.push_back(next_row_id_++);
            row_pool_.push_back(p);
            inactive_.push_back(0);
            pool_in_lp_[p] = 1;
            warm.rows.push_back(VarStatus::Basic);
            ++by_kind[static_cast<std::size_t>(cut.kind())];
            ++added;
        }
        if (added > 0 && log_.debug())
            log_.line("cuts added subtour=", by_kind[0], " gamma=", by_kind[1], " vertex=", by_kind[2],
                      " link=", by_kind[3], " ci=", by_kind[4], " rows=", model_.row_count());
        return added;
    }

    int rescan_pool(const SupportGraph &g, Basis &warm)
    {
        std::vector<std::pair<double, int>> hits;
        for (int p = 0; p < pool_.size(); ++p) {
            if (pool_in_lp_[p])
                continue;
            if (!uses_cover_intersection(cfg_.mode) && pool_[p].kind() == CutKind::CoverIntersection)
                continue;
            const double viol = pool_[p].violation(g);
            if (viol > kMinViolation)
                hits.emplace_back(-viol, p);
        }
        std::stable_sort(hits.begin(), hits.end());
        if (static_cast<int>(hits.size()) > cap())
            hits.resize(static_cast<std::size_t>(cap()));
        std::vector<int> idx;
        for (const auto &h : hits)
            idx.push_back(h.second);
        return add_pool_rows(idx, warm);
    }

    void notify(Routine routine, const SupportGraph &g, const SeparationOutcome &o, int depth) const
    {
        if (cfg_.on_separation)
            cfg_.on_separation(SeparationEvent{routine, g, o, cfg_.epsilon, depth});
    }

    void fix_by_reduced_cost()
    {
        const double limit = ub_ - 1.0 + kIntegrality;
        for (int j = 0; j < model_.column_count(); ++j) {
            if (global_lo_[j] == global_up_[j])
                continue;
            const double d = root_reduced_[j];
            if (root_status_[j] == VarStatus::AtLower && root_bound_ + d > limit) {
                global_up_[j] = global_lo_[j];
                if (j < lay_.edges)
                    fixed_zero_edge_[j] = true;
                ++stats_.fixed_columns;
            } else if (root_status_[j] == VarStatus::AtUpper && root_bound_ - d > limit) {
                global_lo_[j] = global_up_[j];
                ++stats_.fixed_columns;
            }
        }
    }

    void finish_root(const LpSolution &sol)
    {
        stats_.root_bound = sol.objective;
        if (log_.info())
            log_.line("root bound=", sol.objective, " rounds=", stats_.root_rounds,
                      " rows=", model_.row_count());
        HeuristicOptions hopt;
        hopt.starts = std::max(1, cfg_.heuristic_starts / 2);
        const Eigen::VectorXd y = sol.values.tail(lay_.vertices);
        hopt.guide = &y;
        offer_tour(primal_heuristic(inst_, cov_, rng_, hopt).order, "lp-guided");
        root_reduced_ = sol.reduced_costs;
        root_status_ = sol.basis.columns;
        root_bound_ = sol.objective;
        have_root_duals_ = true;
        fix_by_reduced_cost();
    }

    NodeOutcome process(SearchNode &node, std::array<SearchNode, 2> &kids)
    {
        const bool is_root = node.depth == 0;
        if (bounds_conflict(node))
            return NodeOutcome::Pruned;
        apply_bounds(node);
        Basis warm = restore(node.basis);
        const bool ci = uses_cover_intersection(cfg_.mode);
        // the root of a CI configuration first converges exactly like its sibling without CI
        bool ci_phase = !is_root;
        int rounds = 0;

        while (true) {
            if (time_up())
                return NodeOutcome::Timeout;
            const auto lp_start = Clock::now();
            LpSolution sol = solve_current(warm);
            const double lp_seconds = std::chrono::duration<double>(Clock::now() - lp_start).count();
            if (sol.status != LpStatus::Optimal) {
                if (is_root)
                    throw std::logic_error("root relaxation infeasible");
                return NodeOutcome::Pruned;
            }
            node.bound = std::max(node.bound, sol.objective);
            if (log_.debug())
                log_.line("lp obj=", sol.objective, " iters=", sol.iterations, " rows=", model_.row_count(),
                          " s=", lp_seconds);
            if (prunable(sol.objective)) {
                if (is_root)
                    stats_.root_bound = sol.objective;
                return NodeOutcome::Pruned;
            }
            purge_rows(sol);
            warm = sol.basis;

            SupportGraph g = SupportGraph::from_solution(inst_, sol.values);
            SeparationOptions opt;
            opt.cover_intersection = ci && ci_phase;
            opt.epsilon = cfg_.epsilon;

            if (g.integral(kIntegrality)) {
                g = SupportGraph::from_solution(inst_, sol.values.array().round().matrix());
                const SeparationOutcome o = separate_integer(g, cov_, {ci, false, cfg_.epsilon});
                notify(Routine::Integer, g, o, node.depth);
                if (!o.empty() && add_cuts(o, warm) > 0)
                    continue;
                const std::vector<int> tour = extract_tour(g);
                if (tour.empty())
                    throw std::logic_error("integral point with subcycles but no violated cut");
                if (is_root)
                    stats_.root_bound = sol.objective;
                offer_tour(tour, "lp");
                return NodeOutcome::Pruned;
            }

            const int cap_rounds = is_root ? cfg_.root_round_cap : cfg_.node_round_cap;
            if (cfg_.mode != Mode::I && rounds < cap_rounds) {
                if (rescan_pool(g, warm) > 0) {
                    ++rounds;
                    continue;
                }
                SeparationOutcome o;
                Routine routine;
                if (is_root) {
                    routine = Routine::Exact;
                    o = separate_fractional_exact(g, cov_, opt);
                } else if (cfg_.mode == Mode::IFvp || cfg_.mode == Mode::IFvpX) {
                    routine = Routine::ExactFirstFound;
                    opt.first_found = true;
                    o = separate_fractional_exact(g, cov_, opt);
                } else {
                    routine = Routine::Heuristic;
                    o = separate_fractional_heuristic(g, cov_, opt);
                }
                notify(routine, g, o, node.depth);
                if (log_.debug())
                    log_.line("separation flows=", o.stats.flow_calls, " found=", o.cuts.size(),
                              " s=", o.stats.seconds);
                if (!o.empty() && add_cuts(o, warm) > 0) {
                    ++rounds;
                    if (is_root)
                        ++stats_.root_rounds;
                    continue;
                }
            }
            if (is_root && ci && !ci_phase) {
                ci_phase = true;
                rounds = 0;
                continue;
            }

            if (is_root)
                finish_root(sol);
            if (prunable(sol.objective))
                return NodeOutcome::Pruned;
            kids = branch(inst_, cov_, node, sol);
            const BasisSnapshot snap = snapshot(sol.basis);
            for (auto &k : kids)
                k.basis = snap;
            return NodeOutcome::Branched;
        }
    }

    const Instance &inst_;
    const CoverageModel &cov_;
    SolverConfig cfg_;
    VariableLayout lay_;
    LpModel model_;
    std::mt19937_64 rng_;
    Clock::time_point start_;
    RunLog log_;

    std::vector<long> row_id_;
    std::vector<int> row_pool_;
    std::vector<int> inactive_;
    long next_row_id_ = 0;
    long next_node_id_ = 0;

    CutPool pool_;
    std::vector<char> pool_in_lp_;

    std::vector<double> global_lo_, global_up_;
    std::vector<bool> fixed_zero_edge_;
    Eigen::VectorXd root_reduced_;
    std::vector<VarStatus> root_status_;
    double root_bound_ = 0.0;
    bool have_root_duals_ = false;

    Basis last_basis_;
    double ub_ = kInfinity;
    std::vector<int> best_tour_;
    SolveStats stats_;
};

}  // namespace

SolveResult solve(const Instance &inst, const CoverageModel &cov, const SolverConfig &config)
{
    if (inst.size() < 3)
        throw std::invalid_argument("instance needs at least 3 vertices");
    if (cov.size() != inst.size())
        throw std::invalid_argument("coverage model does not match instance");
    if (config.epsilon < 0.0)
        throw std::invalid_argument("epsilon must be non-negative");
    if (!(config.time_limit > 0.0))
        throw std::invalid_argument("time limit must be positive");
    BranchAndCut bc(inst, cov, config);
    return bc.run();
}

}  // namespace csp
