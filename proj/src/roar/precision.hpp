#pragma once

#include "roar/common.hpp"

namespace roar {

// A producer's quality response to pay. Precision (1/variance) is the unit
// of quality; it rises affinely with compensation at 1/rho per unit money,
// so rho is the producer's price of precision.
struct PrecisionModel {
  double baseline = 1.0;  // precision at zero pay, > 0
  double rho = 1.0;       // money per unit of precision, > 0

  void validate() const;
};

// precision(c) = baseline + c / rho. Throws NegativeCompensation.
double affine_precision(const PrecisionModel& model, Money c);

// Stylized demand side: a market maker's profitability decays as exp(-sigma)
// in the standard error of its key estimate. Used to convert a stream's
// previous-epoch prediction error into the pot it can afford.
Money marketmaker_payoff(double sigma, Money scale);

}  // namespace roar
