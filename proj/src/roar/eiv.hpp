#pragma once

#include <Eigen/Dense>

#include "roar/common.hpp"

namespace roar {

// Classical measurement-error attenuation. When regressors are observed
// with independent zero-mean noise, the OLS slopes converge to
//   b_hat = (Sigma_x + Sigma_eta)^{-1} Sigma_x b
// which shrinks each coefficient; gamma_i = b_hat_i / b_i records the
// shrinkage (the univariate case reduces to the reliability ratio
// Var(x) / (Var(x) + sigma^2)).
struct AttenuationEstimate {
  Eigen::VectorXd gamma;                  // per-slope shrinkage, (0,1] in the
                                          // diagonal noise case
  Eigen::MatrixXd regressor_covariance;   // Sigma_x
  Eigen::MatrixXd noise_covariance;       // Sigma_eta
};

struct AttenuationResult {
  Eigen::VectorXd attenuated_slopes;
  AttenuationEstimate estimate;
};

// Throws SingularMatrix when Sigma_x + Sigma_eta stays singular after a
// 1e-12-scaled ridge, DimensionMismatch on shape errors.
AttenuationResult attenuation_factors(const Eigen::MatrixXd& regressor_cov,
                                      const Eigen::MatrixXd& noise_cov,
                                      const Eigen::VectorXd& true_slopes);

// Inverse direction: recover de-attenuated slopes b from attenuated ones by
// solving Sigma_x b = (Sigma_x + Sigma_eta) b_hat. Uses a spectral
// pseudo-inverse of Sigma_x so epochs where sample noise swallowed a
// direction degrade instead of exploding.
Eigen::VectorXd solve_deattenuation(const Eigen::MatrixXd& regressor_cov,
                                    const Eigen::MatrixXd& noise_cov,
                                    const Eigen::VectorXd& attenuated_slopes);

// Clips negative eigenvalues to zero. Sample noise can exceed sample signal
// in short epochs, so Sigma_x = cov(x_hat) - Sigma_eta needs flooring.
Eigen::MatrixXd floor_psd(const Eigen::MatrixXd& m);

// One epoch of parent observations: the children's noisy answers, the
// later-revealed input truths, and the target truth.
struct EpochObservations {
  Eigen::MatrixXd xhat;    // rounds x n
  Eigen::MatrixXd xtruth;  // rounds x n
  Eigen::VectorXd y;       // rounds

  Eigen::Index rounds() const { return xhat.rows(); }
  Eigen::Index inputs() const { return xhat.cols(); }
};

struct EpochFit {
  Eigen::VectorXd coeff_attenuated;    // n+1, intercept first; the raw OLS fit
  Eigen::VectorXd coeff_deattenuated;  // n+1, estimate of the true model
  Eigen::VectorXd noise_variances;     // n, from (xhat - xtruth) residuals
  Eigen::MatrixXd regressor_covariance;  // Sigma_x, floored
  Eigen::VectorXd gamma;               // n
  Eigen::VectorXd regressor_mean;      // n, mean of xhat
  double target_mean = 0.0;
};

// Fits one epoch: per-child noise variances, OLS of y on [1, xhat], the
// noise-corrected regressor covariance, and the de-attenuated coefficients.
// Requires at least 10*(n+1) rounds (InsufficientData); throws
// SingularDesign when the OLS normal matrix condition number exceeds 1e12.
EpochFit fit_epoch(const EpochObservations& obs);

}  // namespace roar
