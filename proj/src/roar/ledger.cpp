#include "roar/ledger.hpp"

#include <algorithm>

namespace roar {

void Ledger::apply(const std::string& stream_id, std::uint64_t round_index,
                   const std::map<std::string, Value>& predictions,
                   const Value& truth,
                   const std::map<std::string, Money>& payouts) {
  for (const auto& [agent, amount] : payouts) {
    auto pred = predictions.find(agent);
    if (pred == predictions.end())
      fail(Err::PayoutMismatch, "ledger payout for '" + agent +
                                    "' without a prediction");
    auto& entry = entries_[agent];
    entry.cumulative += amount;
    entry.history.push_back(RoundScore{stream_id, round_index,
                                       squared_error(pred->second, truth),
                                       amount});
  }
}

Money Ledger::cumulative(const std::string& agent) const {
  auto it = entries_.find(agent);
  return it == entries_.end() ? 0.0 : it->second.cumulative;
}

std::vector<std::pair<std::string, Money>> Ledger::leaderboard() const {
  std::vector<std::pair<std::string, Money>> board;
  board.reserve(entries_.size());
  for (const auto& [agent, entry] : entries_)
    board.emplace_back(agent, entry.cumulative);
  std::sort(board.begin(), board.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return board;
}

}  // namespace roar
