#pragma once

#include <Eigen/Dense>

#include "roar/common.hpp"
#include "roar/rng.hpp"

namespace roar {

// A matching-pursuit dictionary: unit-norm atoms as columns.
struct Dictionary {
  Eigen::MatrixXd atoms;  // dim x count

  Eigen::Index dim() const { return atoms.rows(); }
  Eigen::Index count() const { return atoms.cols(); }

  // Unit norms to 1e-12; throws InvalidSpec.
  void validate() const;

  static Dictionary random(Eigen::Index dim, Eigen::Index count, Rng& rng);
};

struct MatchingPursuitStep {
  Eigen::Index atom_index = 0;
  double coefficient = 0.0;
  Eigen::VectorXd residual;
};

// One greedy projection: picks the atom with the largest |<residual, atom>|
// (lowest index on ties), removes that component. The new residual is
// orthogonal to the chosen atom.
MatchingPursuitStep matching_pursuit_step(const Dictionary& dict,
                                          const Eigen::VectorXd& residual);

}  // namespace roar
