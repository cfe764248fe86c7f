#include "csp/support_graph.hpp"

#include <cmath>
#include <stdexcept>

namespace csp {

SupportGraph::SupportGraph(const Instance &inst, const Eigen::VectorXd &x, const Eigen::VectorXd &y)
    : n_(inst.size()), x_(x), y_(y), vertices_(inst.size()), incident_(inst.size())
{
    if (x.size() != inst.edge_count() || y.size() != n_)
        throw std::invalid_argument("point dimensions do not match instance");
    for (int v = 0; v < n_; ++v)
        if (y_[v] > kZero)
            vertices_.insert(v);
    for (int e = 0; e < inst.edge_count(); ++e) {
        if (x_[e] <= kZero)
            continue;
        const Edge &ed = inst.edge(e);
        incident_[ed.u].push_back(static_cast<int>(edges_.size()));
        incident_[ed.v].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({ed.u, ed.v, e, std::min(x_[e], 1.0)});
    }
}

SupportGraph SupportGraph::from_solution(const Instance &inst, const Eigen::VectorXd &values)
{
    const VariableLayout lay(inst);
    if (values.size() != lay.total())
        throw std::invalid_argument("solution vector has wrong size");
    return SupportGraph(inst, values.head(lay.edges), values.tail(lay.vertices));
}

double SupportGraph::cut_weight(const VertexSet &s) const
{
    double w = 0.0;
    for (const auto &e : edges_)
        if (s.contains(e.u) != s.contains(e.v))
            w += e.x;
    return w;
}

double SupportGraph::union_cut_weight(const VertexSet &a, const VertexSet &b) const
{
    double w = 0.0;
    for (const auto &e : edges_)
        if (a.contains(e.u) != a.contains(e.v) || b.contains(e.u) != b.contains(e.v))
            w += e.x;
    return w;
}

double SupportGraph::cut_weight_outside(const VertexSet &b, const VertexSet &a) const
{
    double w = 0.0;
    for (const auto &e : edges_)
        if (b.contains(e.u) != b.contains(e.v) && a.contains(e.u) == a.contains(e.v))
            w += e.x;
    return w;
}

std::vector<VertexSet> SupportGraph::components() const
{
    std::vector<VertexSet> out;
    std::vector<int> comp(static_cast<std::size_t>(n_), -1);
    std::vector<int> stack;
    vertices_.for_each([&](int root) {
        if (comp[root] >= 0)
            return;
        const int id = static_cast<int>(out.size());
        out.emplace_back(n_);
        comp[root] = id;
        stack.push_back(root);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            out[id].insert(u);
            for (int ei : incident_[u]) {
                const auto &e = edges_[ei];
                const int w = e.u == u ? e.v : e.u;
                if (comp[w] < 0) {
                    comp[w] = id;
                    stack.push_back(w);
                }
            }
        }
    });
    return out;
}

bool SupportGraph::integral(double tol) const
{
    for (Eigen::Index i = 0; i < x_.size(); ++i)
        if (std::abs(x_[i] - std::round(x_[i])) > tol)
            return false;
    for (Eigen::Index i = 0; i < y_.size(); ++i)
        if (std::abs(y_[i] - std::round(y_[i])) > tol)
            return false;
    return true;
}

int SupportGraph::argmax_y(const VertexSet &s) const
{
    int best = -1;
    s.for_each([&](int v) {
        if (y_[v] > kZero && (best < 0 || y_[v] > y_[best]))
            best = v;
    });
    return best;
}

}  // namespace csp
