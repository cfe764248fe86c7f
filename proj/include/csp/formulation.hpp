#pragma once

#include "csp/instance.hpp"
#include "csp/lp.hpp"

namespace csp {

/**
 * Relaxation without connectivity rows: min sum c_e x_e subject to
 * x(delta(v)) - 2 y_v = 0 and sum_{i in C(v)} y_i >= 1 for every v,
 * with all variables in [0, 1]. Columns follow VariableLayout.
 */
LpModel build_root_model(const Instance &inst, const CoverageModel &cov);

}  // namespace csp
