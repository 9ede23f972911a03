#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "roar/agents.hpp"
#include "roar/generators.hpp"
#include "roar/ledger.hpp"
#include "roar/protocol.hpp"
#include "roar/report.hpp"
#include "roar/scenario.hpp"
#include "roar/scoring.hpp"

namespace roar {

// The configured economy with its streams, agents and books, independent of
// what drives it. The simulator advances it on simulated time; the network
// service advances it on wall-clock time and injects external predictions.
// Either way every mutation happens on the driver's single thread.
class World {
 public:
  World(Scenario scenario, std::optional<std::uint64_t> seed_override);
  ~World();

  const Scenario& scenario() const { return scenario_; }

  // Effective streams, including the synthesized error streams that back
  // stacker/helper wirings. Ordered so generator inputs come first.
  const std::vector<StreamConfig>& streams() const { return streams_; }
  bool has_stream(const std::string& id) const;
  const StreamSpec& stream_spec(const std::string& id) const;

  struct ScheduledAnswer {
    std::string agent_id;
    std::string stream_id;
    Timestamp at;
  };

  // Opens round k on every stream at `now` (ground truths drawn in
  // dependency order) and returns when each internal producer will answer.
  std::vector<ScheduledAnswer> begin_round(std::uint64_t k, Timestamp now);

  // Computes and submits one internal agent's answer. Late or misdirected
  // answers are discarded and counted, never fatal.
  void produce_answer(const std::string& agent_id, const std::string& stream_id,
                      std::uint64_t k, Timestamp now);

  // External prediction entering from the wire. Throws RoarError for the
  // caller to map onto an error reply (late, closed, parse, ...).
  void inject_prediction(const std::string& agent_name,
                         const std::string& stream_id, std::uint64_t k,
                         Value value, Timestamp now);

  // Early close once every expected producer has answered (serve mode).
  void close_stream_round(const std::string& stream_id, Timestamp now);

  struct SettleRecord {
    std::string stream_id;
    std::uint64_t round_index = 0;
    Value truth;
    std::map<std::string, Value> predictions;
    std::map<std::string, Money> payouts;
    bool epoch_finished = false;
  };

  // Reveal + notify + score + settle + record, in that order.
  SettleRecord reveal_and_settle(const std::string& stream_id, std::uint64_t k,
                                 Timestamp now);

  const Round* current_round(const std::string& stream_id) const;

  // Prediction some agent submitted to round k of a stream, whether the
  // round is still open or already settled this round.
  std::optional<Value> prediction_of(const std::string& stream_id,
                                     std::uint64_t k,
                                     const std::string& agent) const;

  const Ledger& ledger() const { return ledger_; }
  const ScoringRule& scoring() const { return scenario_.scoring; }
  std::uint64_t horizon() const { return scenario_.horizon; }

  // Names of declared external producers per stream (serve early-close).
  std::vector<std::string> external_agents(const std::string& stream_id) const;

  // Voids any open rounds, flushes the trailing epoch, builds the report.
  RunReport finish(bool partial);

 private:
  struct SimAgent;

  SimAgent& agent(const std::string& id);
  Value compute_answer(SimAgent& a, const std::string& stream_id,
                       std::uint64_t k, Timestamp now);
  void notify_truth(const std::string& stream_id, std::uint64_t k,
                    const Round& round, Timestamp now);
  void accumulate_settle(const Round& round);
  void maybe_finish_epoch();
  void epoch_transition();
  std::uint64_t rounds_in_epoch(std::uint64_t epoch) const;

  Scenario scenario_;
  std::uint64_t seed_ = 0;

  std::vector<StreamConfig> streams_;  // topo order, err streams appended
  std::map<std::string, std::size_t> stream_index_;
  std::vector<std::unique_ptr<Generator>> generators_;  // by stream index
  std::vector<std::unique_ptr<StreamBook>> books_;      // by stream index
  std::map<std::string, Value> current_truth_;
  std::map<std::string, Money> current_pot_;
  std::map<std::string, Round> last_settled_;

  std::map<std::string, std::unique_ptr<SimAgent>> agents_;
  std::vector<std::string> agent_order_;  // within-round topo order

  Ledger ledger_;
  RunReport report_;

  // epoch state
  std::uint64_t epoch_ = 0;
  std::uint64_t settled_in_epoch_ = 0;
  bool epoch_row_written_for_last_ = false;

  struct DemandState {
    double sq_sum = 0.0;
    std::uint64_t rounds = 0;
  };
  std::map<std::string, DemandState> demand_;
};

}  // namespace roar
