#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roar/common.hpp"

namespace roar {

struct RoundScore {
  std::string stream_id;
  std::uint64_t round_index = 0;
  double squared_error = 0.0;
  Money payout = 0.0;

  bool operator==(const RoundScore&) const = default;
};

struct LedgerEntry {
  Money cumulative = 0.0;
  std::vector<RoundScore> history;

  bool operator==(const LedgerEntry&) const = default;
};

// Append-only per-agent compensation record. Mutated only from the single
// event-loop thread; reads elsewhere take snapshots.
class Ledger {
 public:
  // Records a settled round. Every payout key must have a prediction so the
  // squared error can be logged alongside the money.
  void apply(const std::string& stream_id, std::uint64_t round_index,
             const std::map<std::string, Value>& predictions,
             const Value& truth, const std::map<std::string, Money>& payouts);

  // Reload path for summaries read back from disk: restores a cumulative
  // total without per-round history.
  void seed_cumulative(const std::string& agent, Money amount) {
    entries_[agent].cumulative = amount;
  }

  const std::map<std::string, LedgerEntry>& entries() const {
    return entries_;
  }

  Money cumulative(const std::string& agent) const;

  // Descending cumulative payout; ties broken by agent id ascending.
  std::vector<std::pair<std::string, Money>> leaderboard() const;

  bool operator==(const Ledger&) const = default;

 private:
  std::map<std::string, LedgerEntry> entries_;
};

}  // namespace roar
