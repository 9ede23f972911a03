#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "roar/common.hpp"

namespace roar {

// One named prediction stream. A round of the stream is the full
// question -> prediction -> truth -> compensation cycle.
struct StreamSpec {
  std::string stream_id;
  std::int64_t cadence_ms = 2000;   // gap between question issuances
  std::int64_t deadline_ms = 1500;  // prediction cutoff after issuance
  Money pot = 0.0;                  // compensation pool per round
  std::size_t value_dim = 1;        // components per prediction

  // Throws InvalidSpec. A round must close before the next one opens,
  // hence deadline < cadence.
  void validate() const;
};

enum class RoundState { Open, Closed, Settled };

const char* to_string(RoundState s);

struct Round {
  std::string stream_id;
  std::uint64_t round_index = 0;
  Timestamp issued_at = 0;
  Timestamp deadline_at = 0;
  Money pot = 0.0;
  // Pot actually distributed at settlement: equals pot when anyone
  // participated, 0 for an empty round.
  Money pot_charged = 0.0;
  RoundState state = RoundState::Open;
  std::size_t value_dim = 1;
  std::map<std::string, Value> predictions;  // agent id -> value
  std::optional<Value> truth;
  std::optional<std::map<std::string, Money>> payouts;

  bool operator==(const Round&) const = default;
};

// The four protocol operations. All of them mutate a Round and enforce the
// Open -> Closed -> Settled lifecycle; they throw RoarError on misuse and
// never roll a round backwards.

Round open_round(const StreamSpec& spec, std::uint64_t round_index,
                 Timestamp now);

// Last write per agent wins. Throws LateSubmission when now > deadline_at
// (the prediction is discarded) and RoundNotOpen once the round closed.
void submit_prediction(Round& round, const std::string& agent, Value value,
                       Timestamp now);

// Freezes predictions without revealing truth. The referee may close early
// once every expected producer has answered; nothing can leak into a closed
// round, so revealing after an early close is sound.
void close_round(Round& round, Timestamp now);

// On an Open round requires now > deadline_at (TruthBeforeDeadline guards
// leakage); on a Closed round requires that no truth was revealed yet.
void reveal_truth(Round& round, Value truth, Timestamp now);

// Requires truth present. Payout keys must be a subset of prediction keys
// and sums must match the round pot to 1e-12 (0 for an empty round).
void settle_round(Round& round, std::map<std::string, Money> payouts);

// Per-stream sequencing: one open round at a time, duplicate indices
// rejected, settled rounds handed to a sink so memory stays bounded.
class StreamBook {
 public:
  using SettleSink = std::function<void(const Round&)>;

  explicit StreamBook(StreamSpec spec);

  const StreamSpec& spec() const { return spec_; }

  Round& open(std::uint64_t round_index, Timestamp now,
              std::optional<Money> pot_override = std::nullopt);

  // The in-flight round (Open or Closed, not yet settled), if any.
  Round* current();
  const Round* current() const;

  void submit(const std::string& agent, Value value, Timestamp now);
  void close(Timestamp now);
  void reveal(Value truth, Timestamp now);
  Round settle(std::map<std::string, Money> payouts);

  // Drop the in-flight round without settling (shutdown path). The pot is
  // never charged. Returns true if a round was voided.
  bool void_current();

  void set_settle_sink(SettleSink sink) { settle_sink_ = std::move(sink); }

  std::uint64_t settled_count() const { return settled_count_; }
  Money pot_charged_total() const { return pot_charged_total_; }

 private:
  Round& require_current();

  StreamSpec spec_;
  std::optional<Round> current_;
  std::set<std::uint64_t> used_indices_;
  std::uint64_t settled_count_ = 0;
  Money pot_charged_total_ = 0.0;
  SettleSink settle_sink_;
};

}  // namespace roar
