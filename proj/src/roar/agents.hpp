#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "roar/budget.hpp"
#include "roar/eiv.hpp"
#include "roar/precision.hpp"
#include "roar/rng.hpp"

namespace roar {

// A producer that observes one input stream and answers with an unbiased
// estimate whose noise variance is 1/precision. Precision follows the
// affine pay response and changes only at epoch boundaries.
class ChildAgent {
 public:
  ChildAgent(std::string id, PrecisionModel model, std::uint64_t noise_seed);

  const std::string& id() const { return id_; }
  const PrecisionModel& model() const { return model_; }
  double current_precision() const { return precision_; }

  // truth + N(0, 1/precision) from this child's own seeded stream.
  double respond(double truth);

  // Re-prices quality for the coming epoch: precision = affine(model, pay).
  void apply_compensation(Money per_round_pay);

 private:
  std::string id_;
  PrecisionModel model_;
  double precision_;
  Rng rng_;
};

// The consumer that combines n child streams into a prediction of y,
// refitting coefficients and re-deciding pay once per epoch.
//
// Predictions always use attenuated coefficients (otherwise they would be
// biased); they are re-derived from the de-attenuated estimate and whatever
// noise level the children are believed to run at this epoch, so a change in
// child pay immediately changes how much shrinkage gets applied.
class ParentAgent {
 public:
  ParentAgent(std::string id, Eigen::Index n_children);

  const std::string& id() const { return id_; }
  bool fitted() const { return fit_.has_value(); }
  const EpochFit& fit() const;  // NotFitted

  void fit_epoch(const EpochObservations& obs);

  // Noise the children are expected to produce this epoch (diagonal
  // variances). Re-attenuates the prediction coefficients.
  void set_current_noise(const Eigen::VectorXd& sigma2);

  // Intercept + current attenuated slopes, NotFitted before the first fit.
  double predict(const Eigen::VectorXd& xhat) const;

  // Missing child answers are backfilled with the fitted regressor mean.
  double predict_with_gaps(
      const std::vector<std::optional<double>>& xhat) const;

  // Splits the per-round budget over the children by |de-attenuated slope|
  // against their (advertised or learned) precision models.
  std::vector<Money> set_compensation(
      Money budget, const std::vector<PrecisionModel>& child_models) const;

  const Eigen::VectorXd& current_coefficients() const;  // NotFitted

 private:
  std::string id_;
  Eigen::Index n_;
  std::optional<EpochFit> fit_;
  Eigen::VectorXd coeff_current_;  // n+1, intercept first
};

// The stacking correction: a bot that asked a helper to predict its error
// subtracts the helper's answer; a helper timeout degrades to the raw
// prediction.
double residual_stack_respond(double primary,
                              std::optional<double> predicted_error);

// Recovers a child's precision model from per-epoch (pay, realized
// precision) pairs by least squares on precision = baseline + pay/rho.
// Needs two distinct pay levels; throws InsufficientData otherwise.
PrecisionModel estimate_precision_model(
    const std::vector<std::pair<Money, double>>& pay_precision);

}  // namespace roar
