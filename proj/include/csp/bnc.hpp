#pragma once

#include "csp/cuts.hpp"
#include "csp/heuristic.hpp"
#include "csp/instance.hpp"
#include "csp/lp.hpp"
#include "csp/separation.hpp"
#include "csp/support_graph.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace csp {

/// The five configurations: integer separation only, then exact (vp) or heuristic (h)
/// fractional separation away from the root, each with or without CI cuts (X).
enum class Mode : std::uint8_t { I, IFvp, IFvpX, IFh, IFhX };

const char *to_string(Mode mode);
/// Accepts the short names (I, IFvp, IFvpX, IFh, IFhX).
Mode parse_mode(const std::string &text);
bool uses_cover_intersection(Mode mode);

enum class SolveStatus : std::uint8_t { Optimal, Feasible, BoundOnly, TimeoutNoIncumbent };

const char *to_string(SolveStatus status);

enum class Routine : std::uint8_t { Integer, Exact, ExactFirstFound, Heuristic };

/// One separation call as seen by SolverConfig::on_separation.
struct SeparationEvent {
    Routine routine;
    const SupportGraph &point;
    const SeparationOutcome &outcome;
    double epsilon;
    int depth;
};

struct SolverConfig {
    Mode mode = Mode::IFhX;
    double epsilon = 1.0;
    double time_limit = 3600.0;
    std::uint64_t seed = 1;
    int root_round_cap = 200;
    /// Separation rounds per non-root node before branching anyway.
    int node_round_cap = 50;
    /// Most violated cuts added per round; 0 means 2n.
    int cuts_per_round = 0;
    int heuristic_starts = 16;
    std::function<void(const SeparationEvent &)> on_separation;
};

struct SolveStats {
    long nodes = 0;
    std::array<long, 5> cuts{};   // cuts added to the LP, indexed by CutKind
    double root_bound = 0.0;
    int root_rounds = 0;
    long lp_iterations = 0;
    long lp_solves = 0;
    int fixed_columns = 0;
    double heuristic_ub = 0.0;
    double seconds = 0.0;

    long count(CutKind k) const { return cuts[static_cast<std::size_t>(k)]; }
};

struct SolveResult {
    double lower_bound = 0.0;
    std::optional<double> upper_bound;
    double gap = 100.0;
    std::vector<int> tour;
    SolveStatus status = SolveStatus::BoundOnly;
    SolveStats stats;
};

/// ((UB - LB) / UB) * 100; 100 without an upper bound.
double optimality_gap(double lb, std::optional<double> ub);

/**
 * Best-bound branch and cut. Cuts found at any node are globally valid and
 * stay in one shared LP; integral LP points always go through integer
 * separation before they are accepted.
 */
SolveResult solve(const Instance &inst, const CoverageModel &cov, const SolverConfig &config = {});

struct Fixing {
    int column;
    double value;
};

/// LP basis keyed by stable row ids so it survives row additions and removals.
struct BasisSnapshot {
    std::vector<VarStatus> columns;
    std::vector<std::pair<long, VarStatus>> rows;
};

struct SearchNode {
    std::vector<Fixing> fixings;
    double bound = 0.0;
    int depth = 0;
    long id = 0;
    BasisSnapshot basis;
};

/// Two children fixing branching_column() to 1 and to 0, in that order.
/// Throws std::logic_error when the solution is integral.
std::array<SearchNode, 2> branch(const Instance &inst, const CoverageModel &cov,
                                 const SearchNode &node, const LpSolution &solution);

/// Column chosen for branching: the y closest to 0.5 (ties: larger |D(v)|, then index),
/// else the x closest to 0.5 (ties: lower index); -1 if the point is integral.
int branching_column(const Instance &inst, const CoverageModel &cov, const Eigen::VectorXd &values,
                     double tol = 1e-6);

/// Visiting order of the single cycle in an integral point, or empty when it has several.
std::vector<int> extract_tour(const SupportGraph &g);

}  // namespace csp
