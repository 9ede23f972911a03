#include "roar/budget.hpp"

#include <cmath>

namespace roar {

std::vector<Money> optimize_budget_allocation(
    const std::vector<double>& coefficients,
    const std::vector<PrecisionModel>& models, Money budget) {
  const size_t n = coefficients.size();
  if (n == 0) fail(Err::EmptyChildren, "no children to allocate to");
  if (models.size() != n)
    fail(Err::DimensionMismatch, "coefficients and models differ in length");
  if (budget < 0.0)
    fail(Err::NegativeBudget, "budget " + format_double(budget) + " < 0");
  for (const auto& m : models) m.validate();

  std::vector<Money> out(n, 0.0);
  bool any_nonzero = false;
  for (double b : coefficients) any_nonzero |= (b != 0.0);
  if (budget == 0.0 || !any_nonzero) return out;

  auto fill = [&](double lambda, std::vector<Money>& c) -> double {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double b = std::fabs(coefficients[i]);
      if (b == 0.0) {
        c[i] = 0.0;
        continue;
      }
      const double target_p = b / std::sqrt(lambda * models[i].rho);
      c[i] = std::max(0.0, models[i].rho * (target_p - models[i].baseline));
      total += c[i];
    }
    return total;
  };

  // Spend is continuous and decreasing in lambda: bracket then bisect.
  double lo = 1.0, hi = 1.0;
  while (fill(lo, out) < budget) {
    lo *= 0.5;
    if (lo < 1e-300) break;
  }
  while (fill(hi, out) > budget) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }

  const double tol = 1e-9 * std::max(budget, 1.0);
  double spent = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    const double mid = 0.5 * (lo + hi);
    spent = fill(mid, out);
    if (std::fabs(spent - budget) <= tol) break;
    if (spent > budget)
      lo = mid;
    else
      hi = mid;
  }
  return out;
}

}  // namespace roar
