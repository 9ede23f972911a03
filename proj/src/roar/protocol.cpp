#include "roar/protocol.hpp"

#include <cmath>

namespace roar {

void StreamSpec::validate() const {
  if (stream_id.empty()) fail(Err::InvalidSpec, "stream id must be non-empty");
  if (cadence_ms <= 0)
    fail(Err::InvalidSpec, "stream '" + stream_id + "': cadence must be > 0");
  if (deadline_ms <= 0)
    fail(Err::InvalidSpec, "stream '" + stream_id + "': deadline must be > 0");
  if (deadline_ms >= cadence_ms)
    fail(Err::InvalidSpec, "stream '" + stream_id + "': deadline (" +
                               std::to_string(deadline_ms) +
                               " ms) must be < cadence (" +
                               std::to_string(cadence_ms) + " ms)");
  if (!(pot >= 0.0))
    fail(Err::InvalidSpec, "stream '" + stream_id + "': pot must be >= 0");
  if (value_dim == 0)
    fail(Err::InvalidSpec, "stream '" + stream_id + "': value_dim must be >= 1");
}

const char* to_string(RoundState s) {
  switch (s) {
    case RoundState::Open: return "open";
    case RoundState::Closed: return "closed";
    case RoundState::Settled: return "settled";
  }
  return "?";
}

Round open_round(const StreamSpec& spec, std::uint64_t round_index,
                 Timestamp now) {
  spec.validate();
  Round r;
  r.stream_id = spec.stream_id;
  r.round_index = round_index;
  r.issued_at = now;
  r.deadline_at = now + spec.deadline_ms;
  r.pot = spec.pot;
  r.value_dim = spec.value_dim;
  r.state = RoundState::Open;
  return r;
}

void submit_prediction(Round& round, const std::string& agent, Value value,
                       Timestamp now) {
  if (round.state != RoundState::Open)
    fail(Err::RoundNotOpen, "round " + std::to_string(round.round_index) +
                                " of '" + round.stream_id + "' is " +
                                to_string(round.state));
  if (now > round.deadline_at)
    fail(Err::LateSubmission,
         "prediction from '" + agent + "' at t=" + std::to_string(now) +
             " after deadline t=" + std::to_string(round.deadline_at));
  if (value.size() != round.value_dim)
    fail(Err::DimensionMismatch,
         "prediction dimension " + std::to_string(value.size()) +
             " != stream dimension " + std::to_string(round.value_dim));
  if (!is_finite(value))
    fail(Err::ParseError, "prediction from '" + agent + "' is not finite");
  round.predictions[agent] = std::move(value);
}

void close_round(Round& round, Timestamp now) {
  (void)now;
  if (round.state != RoundState::Open)
    fail(Err::RoundNotOpen, "cannot close a " + std::string(to_string(round.state)) +
                                " round");
  round.state = RoundState::Closed;
}

void reveal_truth(Round& round, Value truth, Timestamp now) {
  if (round.state == RoundState::Settled)
    fail(Err::RoundNotOpen, "round already settled");
  if (round.truth.has_value())
    fail(Err::TruthAlreadyRevealed,
         "round " + std::to_string(round.round_index) + " of '" +
             round.stream_id + "' already has truth");
  if (round.state == RoundState::Open && now <= round.deadline_at)
    fail(Err::TruthBeforeDeadline,
         "truth at t=" + std::to_string(now) + " but deadline is t=" +
             std::to_string(round.deadline_at));
  if (truth.size() != round.value_dim)
    fail(Err::DimensionMismatch, "truth dimension mismatch");
  round.state = RoundState::Closed;
  round.truth = std::move(truth);
}

void settle_round(Round& round, std::map<std::string, Money> payouts) {
  if (round.state == RoundState::Settled)
    fail(Err::RoundNotOpen, "round already settled");
  if (!round.truth.has_value())
    fail(Err::SettleBeforeTruth, "round " + std::to_string(round.round_index) +
                                     " of '" + round.stream_id +
                                     "' has no revealed truth");
  double sum = 0.0;
  for (const auto& [agent, amount] : payouts) {
    if (!round.predictions.count(agent))
      fail(Err::PayoutMismatch,
           "payout for '" + agent + "' which never predicted");
    if (!std::isfinite(amount) || amount < 0.0)
      fail(Err::PayoutMismatch, "bad payout amount for '" + agent + "'");
    sum += amount;
  }
  const double expected = payouts.empty() ? 0.0 : round.pot;
  if (std::fabs(sum - expected) > 1e-12)
    fail(Err::PayoutMismatch,
         "payout sum " + format_double(sum) + " != pot " +
             format_double(expected));
  round.pot_charged = expected;
  round.payouts = std::move(payouts);
  round.state = RoundState::Settled;
}

StreamBook::StreamBook(StreamSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

Round& StreamBook::open(std::uint64_t round_index, Timestamp now,
                        std::optional<Money> pot_override) {
  if (current_.has_value())
    fail(Err::DuplicateRound, "stream '" + spec_.stream_id +
                                  "' already has an in-flight round " +
                                  std::to_string(current_->round_index));
  if (used_indices_.count(round_index))
    fail(Err::DuplicateRound, "round " + std::to_string(round_index) +
                                  " of '" + spec_.stream_id +
                                  "' was already opened");
  current_ = open_round(spec_, round_index, now);
  if (pot_override) {
    if (!(*pot_override >= 0.0))
      fail(Err::InvalidSpec, "pot override must be >= 0");
    current_->pot = *pot_override;
  }
  used_indices_.insert(round_index);
  return *current_;
}

Round* StreamBook::current() { return current_ ? &*current_ : nullptr; }
const Round* StreamBook::current() const {
  return current_ ? &*current_ : nullptr;
}

Round& StreamBook::require_current() {
  if (!current_)
    fail(Err::RoundNotOpen, "stream '" + spec_.stream_id +
                                "' has no in-flight round");
  return *current_;
}

void StreamBook::submit(const std::string& agent, Value value, Timestamp now) {
  submit_prediction(require_current(), agent, std::move(value), now);
}

void StreamBook::close(Timestamp now) { close_round(require_current(), now); }

void StreamBook::reveal(Value truth, Timestamp now) {
  reveal_truth(require_current(), std::move(truth), now);
}

Round StreamBook::settle(std::map<std::string, Money> payouts) {
  Round& r = require_current();
  settle_round(r, std::move(payouts));
  settled_count_ += 1;
  pot_charged_total_ += r.pot_charged;
  if (settle_sink_) settle_sink_(r);
  Round settled = std::move(r);
  current_.reset();
  return settled;
}

bool StreamBook::void_current() {
  if (!current_) return false;
  current_.reset();
  return true;
}

}  // namespace roar
