#include "roar/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace roar {

void ScoringRule::validate() const {
  if (!(epsilon > 0.0)) fail(Err::InvalidSpec, "scoring epsilon must be > 0");
  if (!(rank_decay > 0.0 && rank_decay < 1.0))
    fail(Err::InvalidSpec, "rank_decay must be in (0,1)");
}

namespace {

// weights: agent -> non-negative raw weight, not normalized. Distributes
// pot proportionally; the largest weight takes the remainder so the sum is
// exact.
std::map<std::string, Money> distribute(
    const std::map<std::string, double>& weights, Money pot) {
  double total = 0.0;
  for (const auto& [_, w] : weights) total += w;

  std::map<std::string, Money> payouts;
  if (total <= 0.0) {
    // All weights zero (can only happen with degenerate inputs): equal split.
    const double share = pot / static_cast<double>(weights.size());
    for (const auto& [agent, _] : weights) payouts[agent] = share;
  } else {
    for (const auto& [agent, w] : weights) payouts[agent] = pot * (w / total);
  }

  auto largest = payouts.begin();
  for (auto it = payouts.begin(); it != payouts.end(); ++it)
    if (it->second > largest->second) largest = it;
  double others = 0.0;
  for (auto it = payouts.begin(); it != payouts.end(); ++it)
    if (it != largest) others += it->second;
  largest->second = pot - others;
  return payouts;
}

}  // namespace

std::map<std::string, Money> score_round(
    const Value& truth, const std::map<std::string, Value>& predictions,
    Money pot, const ScoringRule& rule) {
  rule.validate();
  if (predictions.empty()) fail(Err::EmptyRound, "no predictions to score");
  if (!(pot >= 0.0)) fail(Err::InvalidSpec, "pot must be >= 0");

  std::map<std::string, double> weights;
  if (rule.variant == ScoringVariant::InverseSquaredError) {
    for (const auto& [agent, value] : predictions)
      weights[agent] = 1.0 / (squared_error(value, truth) + rule.epsilon);
  } else {
    // Rank by |e| ascending; map order breaks nothing since ties share the
    // mean of their rank weights anyway.
    std::vector<std::pair<double, std::string>> ranked;
    ranked.reserve(predictions.size());
    for (const auto& [agent, value] : predictions)
      ranked.emplace_back(squared_error(value, truth), agent);
    std::sort(ranked.begin(), ranked.end());

    size_t i = 0;
    while (i < ranked.size()) {
      size_t j = i;
      while (j < ranked.size() && ranked[j].first == ranked[i].first) ++j;
      double group = 0.0;
      for (size_t r = i; r < j; ++r)
        group += std::pow(rule.rank_decay, static_cast<double>(r));
      const double shared = group / static_cast<double>(j - i);
      for (size_t r = i; r < j; ++r) weights[ranked[r].second] = shared;
      i = j;
    }
  }
  return distribute(weights, pot);
}

}  // namespace roar
