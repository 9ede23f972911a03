#include "roar/dictionary.hpp"

#include <cmath>

namespace roar {

void Dictionary::validate() const {
  if (atoms.rows() < 1 || atoms.cols() < 1)
    fail(Err::InvalidSpec, "dictionary must have at least one atom");
  for (Eigen::Index k = 0; k < atoms.cols(); ++k)
    if (std::fabs(atoms.col(k).norm() - 1.0) > 1e-12)
      fail(Err::InvalidSpec,
           "atom " + std::to_string(k) + " is not unit norm");
}

Dictionary Dictionary::random(Eigen::Index dim, Eigen::Index count, Rng& rng) {
  Dictionary d;
  d.atoms.resize(dim, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    for (Eigen::Index i = 0; i < dim; ++i) d.atoms(i, k) = rng.next_normal();
    d.atoms.col(k).normalize();
  }
  return d;
}

MatchingPursuitStep matching_pursuit_step(const Dictionary& dict,
                                          const Eigen::VectorXd& residual) {
  if (residual.size() != dict.dim())
    fail(Err::DimensionMismatch,
         "residual dimension " + std::to_string(residual.size()) +
             " != atom dimension " + std::to_string(dict.dim()));

  MatchingPursuitStep step;
  double best = -1.0;
  for (Eigen::Index k = 0; k < dict.count(); ++k) {
    const double proj = dict.atoms.col(k).dot(residual);
    if (std::fabs(proj) > best) {  // strict: lowest index wins ties
      best = std::fabs(proj);
      step.atom_index = k;
      step.coefficient = proj;
    }
  }
  step.residual = residual - step.coefficient * dict.atoms.col(step.atom_index);
  return step;
}

}  // namespace roar
