#pragma once

#include "csp/bnc.hpp"
#include "csp/flow.hpp"
#include "csp/instance.hpp"
#include "csp/lp.hpp"

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <vector>

namespace csp {

/// Raised when an exhaustive procedure is asked to go beyond its size cap.
class OracleRefusal : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OracleLimit {
    int max_n_optimum = 12;
    int max_n_tours = 10;
    int max_real_cut = 12;
    int max_nodes_cut = 20;
    int max_lp_columns = 12;
    int max_lp_rows = 10;
};

/// Shortest Hamiltonian cycle on `subset` by dynamic programming; the cycle goes to `order`.
long held_karp(const Instance &inst, const std::vector<int> &subset, std::vector<int> *order = nullptr);

/// Same value by trying every permutation (up to 9 vertices).
long permutation_tsp(const Instance &inst, const std::vector<int> &subset);

/**
 * Minimum over covering subsets S (|S| >= 3) of the shortest cycle on S.
 * Infeasible inputs (no such S) come back with no upper bound and
 * lower_bound = +inf.
 */
SolveResult brute_force_optimum(const Instance &inst, const CoverageModel &cov,
                                const OracleLimit &limit = {});

struct FeasibleTour {
    std::vector<int> order;   // smallest vertex first, smaller neighbour second
    Eigen::VectorXd x;        // edge incidence
    Eigen::VectorXd y;        // vertex incidence
};

/// Calls `visit` once per distinct feasible tour.
void enumerate_feasible_tours(const Instance &inst, const CoverageModel &cov,
                              const std::function<void(const FeasibleTour &)> &visit,
                              const OracleLimit &limit = {});

std::vector<FeasibleTour> feasible_tours(const Instance &inst, const CoverageModel &cov,
                                         const OracleLimit &limit = {});

/// Exhaustive minimum over every source side containing the source and not the sink.
MinCutResult brute_force_min_cut(const FlowNetwork &net, const OracleLimit &limit = {});

/// LP optimum by enumerating basic solutions; +inf when infeasible.
double lp_vertex_enumeration(const LpModel &model, const OracleLimit &limit = {});

}  // namespace csp
