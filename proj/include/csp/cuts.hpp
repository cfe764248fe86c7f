#pragma once

#include "csp/instance.hpp"
#include "csp/lp.hpp"
#include "csp/support_graph.hpp"
#include "csp/vertex_set.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace csp {

enum class CutKind : std::uint8_t { Subtour, Gamma, Vertex, Link, CoverIntersection };

const char *to_string(CutKind kind);
CutKind parse_cut_kind(const std::string &text);

struct CutKey {
    CutKind kind;
    VertexSet set;
    std::array<int, 2> anchors;

    friend bool operator==(const CutKey &, const CutKey &) = default;
};

struct CutKeyHash {
    std::size_t operator()(const CutKey &k) const;
};

/**
 * One inequality over the edge and vertex variables.
 *
 *   Gamma              x(delta(S)) >= 2
 *   Vertex             x(delta(S)) >= 2 y_i
 *   Link, Subtour      x(delta(S)) >= 2 (y_i + y_j - 1)
 *   CoverIntersection  x(delta(S) u delta(S n C(v))) >= 2
 *
 * Factories check the validity conditions of each family and throw
 * std::invalid_argument otherwise, so every Cut value is a valid inequality.
 */
class Cut {
public:
    static Cut gamma(const VertexSet &s, const CoverageModel &cov);
    static Cut vertex(const VertexSet &s, int i, const CoverageModel &cov);
    static Cut link(const VertexSet &s, int i, int j);
    static Cut subtour(const VertexSet &s, int i, int j);
    static Cut cover_intersection(const VertexSet &s, int v, const CoverageModel &cov);

    /// Conditions under which cover_intersection(s, v, cov) succeeds.
    static bool cover_intersection_valid(const VertexSet &s, int v, const CoverageModel &cov);

    CutKind kind() const { return kind_; }
    const VertexSet &set() const { return s_; }
    /// S n C(v) for CoverIntersection; empty otherwise.
    const VertexSet &cover_part() const { return sv_; }
    int anchor() const { return a_; }
    int second_anchor() const { return b_; }
    CutKey key() const { return {kind_, s_, {a_, b_}}; }

    bool uses_cover_part() const { return kind_ == CutKind::CoverIntersection; }
    /// True when edge (u, v) carries coefficient 1.
    bool in_support(int u, int v) const;

    double lhs(const Instance &inst, const Eigen::VectorXd &x) const;
    double lhs(const SupportGraph &g) const;
    double rhs(const Eigen::VectorXd &y) const;
    double violation(const Instance &inst, const Eigen::VectorXd &x, const Eigen::VectorXd &y) const;
    double violation(const SupportGraph &g) const;

    /**
     * Row over the [x; y] layout with coefficient 1 on each support edge. Edges flagged in
     * `skip` are left out (used for columns fixed at 0). With `compact`, cuts on a plain
     * boundary x(delta S) may instead use 2 y(W) - 2 x(E(W)) for W = S or its complement,
     * whichever is sparser; the two agree on every point satisfying the degree rows.
     */
    SparseRow to_lp_row(const Instance &inst, const std::vector<bool> *skip = nullptr,
                        bool compact = false) const;

    /// "kind | members of S | anchors", vertex ids 0-based.
    std::string to_text() const;
    static Cut from_text(const std::string &line, const CoverageModel &cov);

private:
    Cut(CutKind kind, VertexSet s, int a, int b) : kind_(kind), s_(std::move(s)), a_(a), b_(b) {}

    CutKind kind_;
    VertexSet s_;
    VertexSet sv_;
    int a_ = -1;
    int b_ = -1;
};

/// Append-only store of distinct cuts (by CutKey).
class CutPool {
public:
    /// Returns the pool index, or -1 when an equal cut is already stored.
    int add(const Cut &cut);
    bool contains(const Cut &cut) const { return keys_.count(cut.key()) > 0; }
    /// Pool index of an equal cut, or -1.
    int find(const Cut &cut) const;

    int size() const { return static_cast<int>(cuts_.size()); }
    const Cut &operator[](int i) const { return cuts_[static_cast<std::size_t>(i)]; }
    const std::vector<Cut> &cuts() const { return cuts_; }

    void write(std::ostream &out) const;

private:
    std::vector<Cut> cuts_;
    std::unordered_map<CutKey, int, CutKeyHash> keys_;
};

}  // namespace csp
