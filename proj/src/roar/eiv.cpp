#include "roar/eiv.hpp"

#include <cmath>

namespace roar {

namespace {

void require_square_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         Eigen::Index slopes) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    fail(Err::DimensionMismatch, "covariance matrices must be square and equal size");
  if (slopes != a.rows())
    fail(Err::DimensionMismatch, "slope vector length != covariance dimension");
}

}  // namespace

Eigen::MatrixXd floor_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

AttenuationResult attenuation_factors(const Eigen::MatrixXd& regressor_cov,
                                      const Eigen::MatrixXd& noise_cov,
                                      const Eigen::VectorXd& true_slopes) {
  require_square_pair(regressor_cov, noise_cov, true_slopes.size());

  Eigen::MatrixXd total = regressor_cov + noise_cov;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(total);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(scale > 0.0))
    fail(Err::SingularMatrix, "regressor + noise covariance is zero");
  if (es.eigenvalues().minCoeff() <= 1e-12 * scale) {
    // One shot of ridge regularization; beyond that the system is singular.
    total += (1e-12 * scale) * Eigen::MatrixXd::Identity(total.rows(), total.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(total);
    if (es2.eigenvalues().minCoeff() <= 0.0)
      fail(Err::SingularMatrix, "regressor + noise covariance is singular");
  }

  AttenuationResult out;
  out.attenuated_slopes = total.ldlt().solve(regressor_cov * true_slopes);
  out.estimate.regressor_covariance = regressor_cov;
  out.estimate.noise_covariance = noise_cov;
  out.estimate.gamma = Eigen::VectorXd::Ones(true_slopes.size());
  for (Eigen::Index i = 0; i < true_slopes.size(); ++i)
    if (true_slopes[i] != 0.0)
      out.estimate.gamma[i] = out.attenuated_slopes[i] / true_slopes[i];
  return out;
}

Eigen::VectorXd solve_deattenuation(const Eigen::MatrixXd& regressor_cov,
                                    const Eigen::MatrixXd& noise_cov,
                                    const Eigen::VectorXd& attenuated_slopes) {
  require_square_pair(regressor_cov, noise_cov, attenuated_slopes.size());
  const Eigen::VectorXd rhs =
      (regressor_cov + noise_cov) * attenuated_slopes;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(regressor_cov);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(scale > 0.0))
    fail(Err::SingularMatrix, "regressor covariance is zero");
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv[i] = inv[i] > 1e-12 * scale ? 1.0 / inv[i] : 0.0;
  return es.eigenvectors() * inv.asDiagonal() *
         es.eigenvectors().transpose() * rhs;
}

EpochFit fit_epoch(const EpochObservations& obs) {
  const Eigen::Index rounds = obs.rounds();
  const Eigen::Index n = obs.inputs();
  if (n < 1) fail(Err::DimensionMismatch, "epoch has no inputs");
  if (obs.xtruth.rows() != rounds || obs.xtruth.cols() != n ||
      obs.y.size() != rounds)
    fail(Err::DimensionMismatch, "epoch observation shapes disagree");
  if (rounds < 10 * (n + 1))
    fail(Err::InsufficientData,
         "epoch has " + std::to_string(rounds) + " rounds, needs >= " +
             std::to_string(10 * (n + 1)));

  EpochFit fit;
  const double denom = static_cast<double>(rounds - 1);

  // (a) child noise variances from observation residuals
  Eigen::MatrixXd eta = obs.xhat - obs.xtruth;
  Eigen::RowVectorXd eta_mean = eta.colwise().mean();
  eta.rowwise() -= eta_mean;
  fit.noise_variances = eta.colwise().squaredNorm().transpose() / denom;

  // (b) OLS of y on [1, xhat]
  Eigen::MatrixXd design(rounds, n + 1);
  design.col(0).setOnes();
  design.rightCols(n) = obs.xhat;
  Eigen::MatrixXd normal = design.transpose() * design;
  Eigen::VectorXd rhs = design.transpose() * obs.y;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
      fail(Err::SingularDesign, "OLS design is numerically singular");
  }
  fit.coeff_attenuated = normal.ldlt().solve(rhs);

  // (c) regressor covariance with the noise removed, floored to PSD
  fit.regressor_mean = obs.xhat.colwise().mean();
  Eigen::MatrixXd centered = obs.xhat.rowwise() - fit.regressor_mean.transpose();
  Eigen::MatrixXd sample_cov = centered.transpose() * centered / denom;
  Eigen::MatrixXd noise_cov = fit.noise_variances.asDiagonal();
  fit.regressor_covariance = floor_psd(sample_cov - noise_cov);

  // (d) de-attenuation; intercept re-anchored at the sample means
  fit.target_mean = obs.y.mean();
  Eigen::VectorXd slopes_hat = fit.coeff_attenuated.tail(n);
  Eigen::VectorXd slopes_tilde =
      solve_deattenuation(fit.regressor_covariance, noise_cov, slopes_hat);
  fit.coeff_deattenuated.resize(n + 1);
  fit.coeff_deattenuated[0] =
      fit.target_mean - slopes_tilde.dot(fit.regressor_mean);
  fit.coeff_deattenuated.tail(n) = slopes_tilde;

  fit.gamma = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::fabs(slopes_tilde[i]) > 1e-12)
      fit.gamma[i] = slopes_hat[i] / slopes_tilde[i];
  return fit;
}

}  // namespace roar
