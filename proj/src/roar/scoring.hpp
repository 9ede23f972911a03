#pragma once

#include <map>
#include <string>

#include "roar/common.hpp"

namespace roar {

enum class ScoringVariant { InverseSquaredError, RankWeighted };

// How a round's pot is split by relative accuracy. InverseSquaredError pays
// shares proportional to 1/(e_i^2 + epsilon); RankWeighted pays shares
// proportional to rank_decay^rank with |e| ascending, ties sharing the mean
// of their rank weights.
struct ScoringRule {
  ScoringVariant variant = ScoringVariant::InverseSquaredError;
  double epsilon = 1e-9;
  double rank_decay = 0.5;

  void validate() const;
};

// Splits `pot` among the agents in `predictions`. Agents that did not
// predict simply are not in the map and get nothing. Payouts are
// non-negative and sum to the pot exactly (the largest share absorbs the
// rounding remainder). Throws EmptyRound when nobody predicted.
std::map<std::string, Money> score_round(
    const Value& truth, const std::map<std::string, Value>& predictions,
    Money pot, const ScoringRule& rule);

}  // namespace roar
