#pragma once

#include <vector>

#include "roar/common.hpp"
#include "roar/precision.hpp"

namespace roar {

// Splits `budget` across children to minimize the parent's prediction
// variance contribution  sum_i b_i^2 / p_i(c_i)  subject to sum c_i <= budget,
// c_i >= 0, with p_i the affine precision response.
//
// The KKT conditions equalize the marginal variance reduction per unit money
// among funded children, which gives the water-filling form
//   c_i = max(0, rho_i * (|b_i| / sqrt(lambda * rho_i) - baseline_i))
// with the water level lambda found by bisection until the budget is met to
// 1e-9 * max(budget, 1). Children with b_i = 0 get nothing; since variance is
// strictly decreasing in pay for every funded child, the full budget is spent
// whenever any coefficient is nonzero.
std::vector<Money> optimize_budget_allocation(
    const std::vector<double>& coefficients,
    const std::vector<PrecisionModel>& models, Money budget);

}  // namespace roar
