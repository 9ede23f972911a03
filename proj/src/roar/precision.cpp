#include "roar/precision.hpp"

#include <cmath>

namespace roar {

void PrecisionModel::validate() const {
  if (!(baseline > 0.0))
    fail(Err::InvalidSpec, "precision baseline must be > 0");
  if (!(rho > 0.0)) fail(Err::InvalidSpec, "price of precision must be > 0");
}

double affine_precision(const PrecisionModel& model, Money c) {
  model.validate();
  if (c < 0.0)
    fail(Err::NegativeCompensation,
         "compensation " + format_double(c) + " < 0");
  return model.baseline + c / model.rho;
}

Money marketmaker_payoff(double sigma, Money scale) {
  if (!(sigma >= 0.0))
    fail(Err::NegativeSigma, "sigma " + format_double(sigma) + " < 0");
  return scale * std::exp(-sigma);
}

}  // namespace roar
