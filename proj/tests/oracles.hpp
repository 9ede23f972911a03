// Test-only oracles, deliberately independent of the implementation paths
// they check: plain Gaussian elimination instead of Eigen solvers, grid
// search instead of KKT bisection.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "roar/precision.hpp"
#include "roar/rng.hpp"

namespace oracles {

inline double allocation_objective(const std::vector<double>& b,
                                   const std::vector<roar::PrecisionModel>& m,
                                   const std::vector<double>& c) {
  double obj = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    obj += b[i] * b[i] / (m[i].baseline + c[i] / m[i].rho);
  return obj;
}

// Exhaustive 1D grid over the two-child simplex.
inline std::vector<double> grid_allocation_2(
    const std::vector<double>& b, const std::vector<roar::PrecisionModel>& m,
    double budget, double step) {
  std::vector<double> best{0.0, budget}, cand{0.0, 0.0};
  double best_obj = allocation_objective(b, m, best);
  for (double c0 = 0.0; c0 <= budget + 1e-12; c0 += step) {
    cand[0] = std::min(c0, budget);
    cand[1] = budget - cand[0];
    const double obj = allocation_objective(b, m, cand);
    if (obj < best_obj) {
      best_obj = obj;
      best = cand;
    }
  }
  return best;
}

// General n: pairwise grid exchanges from an equal split until no move of
// `step` improves the objective. The objective is separable convex on a
// simplex, so pairwise moves reach the optimum (to grid resolution).
inline std::vector<double> grid_allocation(
    const std::vector<double>& b, const std::vector<roar::PrecisionModel>& m,
    double budget, double step) {
  const std::size_t n = b.size();
  std::vector<double> c(n, budget / static_cast<double>(n));
  if (budget <= 0.0) return std::vector<double>(n, 0.0);
  double obj = allocation_objective(b, m, c);
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double best_delta = 0.0, best_obj = obj;
        for (double delta = -c[i]; delta <= c[j] + 1e-12; delta += step) {
          std::vector<double> t = c;
          t[i] += delta;
          t[j] -= delta;
          if (t[i] < 0.0 || t[j] < 0.0) continue;
          const double o = allocation_objective(b, m, t);
          if (o < best_obj - 1e-15) {
            best_obj = o;
            best_delta = delta;
          }
        }
        if (best_delta != 0.0) {
          c[i] += best_delta;
          c[j] -= best_delta;
          obj = best_obj;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return c;
}

// OLS of y on [1, X] via normal equations and Gaussian elimination with
// partial pivoting. Returns n+1 coefficients, intercept first.
inline std::vector<double> ols(const std::vector<std::vector<double>>& X,
                               const std::vector<double>& y) {
  const std::size_t rows = X.size();
  const std::size_t n = X.front().size();
  const std::size_t d = n + 1;
  std::vector<std::vector<double>> G(d, std::vector<double>(d + 1, 0.0));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> z(d);
    z[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) z[i + 1] = X[r][i];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) G[i][j] += z[i] * z[j];
      G[i][d] += z[i] * y[r];
    }
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs(G[r][col]) > std::fabs(G[piv][col])) piv = r;
    std::swap(G[col], G[piv]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = G[r][col] / G[col][col];
      for (std::size_t j = col; j <= d; ++j) G[r][j] -= f * G[col][j];
    }
  }
  std::vector<double> beta(d);
  for (std::size_t i = 0; i < d; ++i) beta[i] = G[i][d] / G[i][i];
  return beta;
}

// Monte-Carlo attenuated-slope oracle: draws x ~ N(0, Sigma_x) (diagonal or
// 2x2 with given covariance), contaminates with diagonal noise, regresses
// y = b . x and returns the fitted slopes.
inline std::vector<double> mc_attenuated_slopes(
    const std::vector<std::vector<double>>& sigma_x,
    const std::vector<double>& noise_var, const std::vector<double>& b,
    std::size_t samples, std::uint64_t seed) {
  const std::size_t n = b.size();
  roar::Rng rng(seed);
  // Cholesky of sigma_x (tiny n, plain loops).
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = sigma_x[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      L[i][j] = (i == j) ? std::sqrt(s) : s / L[j][j];
    }
  std::vector<std::vector<double>> xhat(samples, std::vector<double>(n));
  std::vector<double> y(samples);
  std::vector<double> z(n);
  for (std::size_t r = 0; r < samples; ++r) {
    for (std::size_t i = 0; i < n; ++i) z[i] = rng.next_normal();
    double target = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double xi = 0.0;
      for (std::size_t k = 0; k <= i; ++k) xi += L[i][k] * z[k];
      target += b[i] * xi;
      xhat[r][i] = xi + std::sqrt(noise_var[i]) * rng.next_normal();
    }
    y[r] = target;
  }
  auto beta = ols(xhat, y);
  return std::vector<double>(beta.begin() + 1, beta.end());
}

}  // namespace oracles
