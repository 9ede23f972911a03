#pragma once

#include <string>
#include <vector>

#include "roar/common.hpp"
#include "roar/scoring.hpp"

namespace roar {

// Independent verification path for leaderboards: a single pass over a
// rounds.csv log. Folds the logged payouts per agent in row order (so sums
// are bit-identical to the live ledger) and, per round, re-derives the
// payout split from the logged truth and predictions with the given scoring
// rule, flagging any disagreement beyond 1e-9.
struct ReplayResult {
  std::vector<std::pair<std::string, Money>> leaderboard;
  std::uint64_t rounds = 0;
  std::uint64_t mismatches = 0;  // logged payouts the rule does not reproduce
};

// Throws ParseError naming the offending line on malformed input. An empty
// file yields an empty leaderboard.
ReplayResult replay_rounds_csv(const std::string& path,
                               const ScoringRule& rule);

}  // namespace roar
