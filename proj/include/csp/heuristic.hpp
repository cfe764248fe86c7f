#pragma once

#include "csp/instance.hpp"

#include <Eigen/Core>

#include <random>
#include <vector>

namespace csp {

struct Tour {
    std::vector<int> order;   // visiting sequence, each vertex once, closing edge implied
    long cost = 0;
};

long tour_cost(const Instance &inst, const std::vector<int> &order);

/// At least 3 distinct vertices and every vertex covered by one of them.
bool is_feasible_tour(const Instance &inst, const CoverageModel &cov, const std::vector<int> &order);

struct HeuristicOptions {
    int starts = 16;
    /// Vertex weights in [0, 1] (usually LP y values) that bias the cover selection.
    const Eigen::VectorXd *guide = nullptr;
};

/**
 * Greedy set cover over the D(v), nearest-neighbour tour on the chosen
 * vertices, then local search (2-opt, vertex drop, vertex swap). The first
 * start is deterministic; later starts perturb the greedy scores with `rng`.
 */
Tour primal_heuristic(const Instance &inst, const CoverageModel &cov, std::mt19937_64 &rng,
                      const HeuristicOptions &options = {});

/// Local search keeping the tour feasible; never increases the cost.
void improve_tour(const Instance &inst, const CoverageModel &cov, Tour &tour);

}  // namespace csp
