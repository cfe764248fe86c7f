#include "csp/formulation.hpp"

#include "csp/support_graph.hpp"

#include <stdexcept>

namespace csp {

LpModel build_root_model(const Instance &inst, const CoverageModel &cov)
{
    const int n = inst.size();
    if (cov.size() != n)
        throw std::invalid_argument("coverage model does not match instance");
    const VariableLayout lay(inst);
    LpModel model;
    for (int e = 0; e < lay.edges; ++e) {
        const Edge &ed = inst.edge(e);
        model.add_column(inst.cost(ed.u, ed.v), 0.0, 1.0);
    }
    for (int v = 0; v < n; ++v)
        model.add_column(0.0, 0.0, 1.0);

    for (int v = 0; v < n; ++v) {
        SparseRow row;
        row.sense = RowSense::Equal;
        for (int u = 0; u < n; ++u)
            if (u != v) {
                row.index.push_back(lay.x(inst.edge_index(u, v)));
                row.value.push_back(1.0);
            }
        row.index.push_back(lay.y(v));
        row.value.push_back(-2.0);
        model.add_row(std::move(row));
    }
    for (int v = 0; v < n; ++v) {
        SparseRow row;
        row.sense = RowSense::Greater;
        row.rhs = 1.0;
        cov.cover_of(v).for_each([&](int i) {
            row.index.push_back(lay.y(i));
            row.value.push_back(1.0);
        });
        model.add_row(std::move(row));
    }
    return model;
}

}  // namespace csp
