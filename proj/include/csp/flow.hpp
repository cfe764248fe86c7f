#pragma once

#include "csp/support_graph.hpp"
#include "csp/vertex_set.hpp"

#include <cstdint>
#include <vector>

namespace csp {

using Capacity = std::int64_t;

/// Fractional edge weights are scaled to integers at this resolution.
inline constexpr double kCapacityScale = 1e6;

Capacity scale_capacity(double x);

struct Arc {
    int from = 0;
    int to = 0;
    Capacity capacity = 0;
    bool infinite = false;
    bool undirected = false;
};

/**
 * Capacitated network over `real_count` instance vertices plus artificial
 * nodes (ids real_count..node_count-1).
 *
 * Infinite arcs carry no number until solved: the solver substitutes a value
 * strictly larger than the sum of all finite capacities.
 */
class FlowNetwork {
public:
    FlowNetwork(int real_count, int node_count);

    int add_node();
    void add_arc(int from, int to, Capacity cap);
    void add_edge(int u, int v, Capacity cap);
    void add_infinite_arc(int from, int to);
    void set_terminals(int source, int sink);

    int real_count() const { return real_count_; }
    int node_count() const { return node_count_; }
    int source() const { return source_; }
    int sink() const { return sink_; }
    const std::vector<Arc> &arcs() const { return arcs_; }

    Capacity finite_total() const;
    Capacity infinity_value() const { return finite_total() + 1; }

    /// Capacity of the cut leaving `source_side` (node ids), infinite arcs at infinity_value().
    Capacity cut_capacity(const std::vector<bool> &source_side) const;

private:
    int real_count_;
    int node_count_;
    int source_ = -1;
    int sink_ = -1;
    std::vector<Arc> arcs_;
};

struct MinCutResult {
    Capacity value = 0;
    bool infinite = false;
    VertexSet source_side;               // real vertices only
    std::vector<bool> source_nodes;      // every node, artificial included
    std::vector<Capacity> arc_flow;      // net flow per arc of the network, in arc order

    double weight() const { return static_cast<double>(value) / kCapacityScale; }
};

/// Push-relabel maximum flow; the cut is the residual-reachable set of the source.
MinCutResult max_flow_min_cut(const FlowNetwork &net);

/**
 * Network whose minimum cut is min x(delta(S)) over S containing side_a and
 * disjoint from side_b. A singleton side is its own terminal; larger sides get
 * an artificial terminal joined by infinite arcs.
 */
FlowNetwork build_cut_network(const SupportGraph &gf, const VertexSet &side_a, const VertexSet &side_b);

/**
 * Cover-intersection network for overlapping C(v), C(u).
 *
 * For each w in C(v) n C(u) an artificial w' joins the sink side, and the
 * support edges from w leaving C(v) n C(u) are replaced by one edge (w, w')
 * carrying their total weight. The minimum cut value is then
 * x(delta(S) u delta(S n C(u))) over S containing C(v) and avoiding C(u) \ C(v).
 */
FlowNetwork augment_for_ci(const SupportGraph &gf, const VertexSet &cv, const VertexSet &cu);

}  // namespace csp
