#pragma once

#include "csp/instance.hpp"

#include <Eigen/Core>

#include <vector>

namespace csp {

/// Variable layout of the CSP model: x_e for every edge, then y_v per vertex.
struct VariableLayout {
    int edges = 0;
    int vertices = 0;

    explicit VariableLayout(const Instance &inst)
        : edges(inst.edge_count()), vertices(inst.size()) {}

    int x(int e) const { return e; }
    int y(int v) const { return edges + v; }
    int total() const { return edges + vertices; }
};

struct SupportEdge {
    int u = 0;
    int v = 0;
    int edge = 0;
    double x = 0.0;
};

/**
 * Graph induced by the strictly positive entries of a point {x, y}.
 *
 * Holds the point itself as well so that cut left-hand sides can be evaluated
 * without the full edge vector.
 */
class SupportGraph {
public:
    static constexpr double kZero = 1e-9;

    SupportGraph(const Instance &inst, const Eigen::VectorXd &x, const Eigen::VectorXd &y);

    /// Splits a model-ordered vector [x; y] (see VariableLayout).
    static SupportGraph from_solution(const Instance &inst, const Eigen::VectorXd &values);

    int size() const { return n_; }
    const VertexSet &vertices() const { return vertices_; }
    double y(int v) const { return y_[v]; }
    const Eigen::VectorXd &y() const { return y_; }
    const Eigen::VectorXd &x() const { return x_; }
    const std::vector<SupportEdge> &edges() const { return edges_; }
    const std::vector<std::vector<int>> &incident() const { return incident_; }

    /// x(delta(S)).
    double cut_weight(const VertexSet &s) const;

    /// x(delta(A) u delta(B)), shared edges counted once.
    double union_cut_weight(const VertexSet &a, const VertexSet &b) const;

    /// x(delta(B) \ delta(A)).
    double cut_weight_outside(const VertexSet &b, const VertexSet &a) const;

    /// Connected components over the support vertices, ordered by smallest member.
    std::vector<VertexSet> components() const;

    /// True when every x_e and y_v is within tol of an integer.
    bool integral(double tol = 1e-6) const;

    /// Support vertex of maximum y in S (ties by smaller index); -1 if none.
    int argmax_y(const VertexSet &s) const;

private:
    int n_ = 0;
    Eigen::VectorXd x_;
    Eigen::VectorXd y_;
    VertexSet vertices_;
    std::vector<SupportEdge> edges_;
    std::vector<std::vector<int>> incident_;
};

}  // namespace csp
