#pragma once

#include "csp/vertex_set.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csp {

using CostMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

struct Point {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

struct Edge {
    int u = 0;
    int v = 0;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedFormatError : public ParseError {
public:
    using ParseError::ParseError;
};

class TruncationError : public ParseError {
public:
    using ParseError::ParseError;
};

/// TSPLIB EUC_2D rounding: nint(d) = floor(d + 0.5).
int euc2d_cost(const Point &a, const Point &b);

/**
 * Complete undirected graph with integer edge costs.
 *
 * Edges of the complete graph are numbered 0..n(n-1)/2-1 in row-major order
 * of the strict upper triangle; edge_index(u, v) is symmetric.
 */
class Instance {
public:
    /// EUC_2D instance; costs are the rounded Euclidean distances.
    Instance(std::string name, std::vector<Point> points);

    /// Instance with explicit costs; points only feed plotting and coverage.
    Instance(std::string name, std::vector<Point> points, CostMatrix cost);

    const std::string &name() const { return name_; }
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<Point> &points() const { return points_; }
    const CostMatrix &costs() const { return cost_; }
    int cost(int u, int v) const { return cost_(u, v); }
    bool has_coordinates() const { return has_coordinates_; }

    /// Unrounded planar distance (falls back to cost when no coordinates).
    double distance(int u, int v) const;

    int edge_count() const { return static_cast<int>(edges_.size()); }
    int edge_index(int u, int v) const;
    const Edge &edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<Edge> &edges() const { return edges_; }

    VertexSet empty_set() const { return VertexSet(size()); }
    VertexSet all_vertices() const { return VertexSet::full(size()); }

private:
    void build_edges();

    std::string name_;
    std::vector<Point> points_;
    CostMatrix cost_;
    std::vector<Edge> edges_;
    bool has_coordinates_ = true;
};

Instance parse_tsplib(std::istream &in);
Instance parse_tsplib_file(const std::filesystem::path &path);

/**
 * Covering sets C(v) and covered sets D(v).
 *
 * C(v) is the set of vertices whose visit covers v; D(v) the set covered by
 * a visit of v. Always v in C(v) and u in C(v) iff v in D(u).
 */
class CoverageModel {
public:
    CoverageModel() = default;

    /// Builds D by transposing the given covering sets (each must contain its vertex).
    static CoverageModel from_cover_sets(std::vector<VertexSet> cover_of, int k = 0);

    int k() const { return k_; }
    int size() const { return static_cast<int>(cover_of_.size()); }
    const VertexSet &cover_of(int v) const { return cover_of_[static_cast<std::size_t>(v)]; }
    const VertexSet &covers(int v) const { return covers_[static_cast<std::size_t>(v)]; }

private:
    int k_ = 0;
    std::vector<VertexSet> cover_of_;
    std::vector<VertexSet> covers_;
};

/// C(v) = {v} plus the k nearest other vertices; ties by smaller index.
CoverageModel build_coverage(const Instance &inst, int k);

/// True iff some v in S has C(v) contained in S.
bool in_gamma(const VertexSet &s, const CoverageModel &cov);

/// D(S), the union of D(v) over v in S.
VertexSet covered_union(const VertexSet &s, const CoverageModel &cov);

/// True iff every vertex is covered by some member of S.
bool covers_all(const VertexSet &s, const CoverageModel &cov);

/// delta(S): edges with exactly one endpoint in S. Requires 0 < |S| < n.
std::vector<int> cut_edge_set(const VertexSet &s, const Instance &inst);

/// E(S): edges with both endpoints in S.
std::vector<int> interior_edge_set(const VertexSet &s, const Instance &inst);

}  // namespace csp
