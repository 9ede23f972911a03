#include "roar/agents.hpp"

#include <cmath>

namespace roar {

ChildAgent::ChildAgent(std::string id, PrecisionModel model,
                       std::uint64_t noise_seed)
    : id_(std::move(id)), model_(model), rng_(noise_seed) {
  model_.validate();
  precision_ = model_.baseline;
}

double ChildAgent::respond(double truth) {
  return truth + rng_.next_normal() / std::sqrt(precision_);
}

void ChildAgent::apply_compensation(Money per_round_pay) {
  precision_ = affine_precision(model_, per_round_pay);
}

ParentAgent::ParentAgent(std::string id, Eigen::Index n_children)
    : id_(std::move(id)), n_(n_children) {
  if (n_ < 1) fail(Err::EmptyChildren, "parent needs at least one child");
}

const EpochFit& ParentAgent::fit() const {
  if (!fit_) fail(Err::NotFitted, "parent '" + id_ + "' has no fit");
  return *fit_;
}

void ParentAgent::fit_epoch(const EpochObservations& obs) {
  if (obs.inputs() != n_)
    fail(Err::DimensionMismatch, "epoch input count != child count");
  fit_ = roar::fit_epoch(obs);
  // Until told otherwise, assume the coming epoch is as noisy as the last.
  set_current_noise(fit_->noise_variances);
}

void ParentAgent::set_current_noise(const Eigen::VectorXd& sigma2) {
  const EpochFit& f = fit();
  if (sigma2.size() != n_)
    fail(Err::DimensionMismatch, "noise vector length != child count");
  Eigen::MatrixXd noise_cov = sigma2.asDiagonal();
  auto att = attenuation_factors(f.regressor_covariance, noise_cov,
                                 f.coeff_deattenuated.tail(n_));
  coeff_current_.resize(n_ + 1);
  coeff_current_.tail(n_) = att.attenuated_slopes;
  coeff_current_[0] =
      f.target_mean - att.attenuated_slopes.dot(f.regressor_mean);
}

const Eigen::VectorXd& ParentAgent::current_coefficients() const {
  if (!fit_) fail(Err::NotFitted, "parent '" + id_ + "' has no fit");
  return coeff_current_;
}

double ParentAgent::predict(const Eigen::VectorXd& xhat) const {
  if (!fit_) fail(Err::NotFitted, "parent '" + id_ + "' has no fit");
  if (xhat.size() != n_)
    fail(Err::DimensionMismatch, "input vector length != child count");
  return coeff_current_[0] + coeff_current_.tail(n_).dot(xhat);
}

double ParentAgent::predict_with_gaps(
    const std::vector<std::optional<double>>& xhat) const {
  if (!fit_) fail(Err::NotFitted, "parent '" + id_ + "' has no fit");
  if (static_cast<Eigen::Index>(xhat.size()) != n_)
    fail(Err::DimensionMismatch, "input vector length != child count");
  Eigen::VectorXd x(n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    x[i] = xhat[i].value_or(fit_->regressor_mean[i]);
  return predict(x);
}

std::vector<Money> ParentAgent::set_compensation(
    Money budget, const std::vector<PrecisionModel>& child_models) const {
  const EpochFit& f = fit();
  if (static_cast<Eigen::Index>(child_models.size()) != n_)
    fail(Err::DimensionMismatch, "model count != child count");
  std::vector<double> slopes(static_cast<size_t>(n_));
  for (Eigen::Index i = 0; i < n_; ++i)
    slopes[static_cast<size_t>(i)] = std::fabs(f.coeff_deattenuated[i + 1]);
  return optimize_budget_allocation(slopes, child_models, budget);
}

double residual_stack_respond(double primary,
                              std::optional<double> predicted_error) {
  return predicted_error ? primary - *predicted_error : primary;
}

PrecisionModel estimate_precision_model(
    const std::vector<std::pair<Money, double>>& pay_precision) {
  if (pay_precision.size() < 2)
    fail(Err::InsufficientData, "need at least two epochs to estimate rho");
  double mc = 0.0, mp = 0.0;
  for (const auto& [c, p] : pay_precision) {
    mc += c;
    mp += p;
  }
  mc /= static_cast<double>(pay_precision.size());
  mp /= static_cast<double>(pay_precision.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [c, p] : pay_precision) {
    sxx += (c - mc) * (c - mc);
    sxy += (c - mc) * (p - mp);
  }
  if (sxx <= 0.0)
    fail(Err::InsufficientData, "pay never varied; rho unidentified");
  const double slope = sxy / sxx;  // = 1/rho
  if (!(slope > 0.0))
    fail(Err::InsufficientData, "precision did not rise with pay");
  PrecisionModel m;
  m.rho = 1.0 / slope;
  m.baseline = mp - slope * mc;
  if (!(m.baseline > 0.0)) m.baseline = 1e-9;  // clamp: model requires > 0
  return m;
}

}  // namespace roar
