#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roar/common.hpp"
#include "roar/precision.hpp"
#include "roar/protocol.hpp"
#include "roar/scoring.hpp"

namespace roar {

// Ground-truth process behind a stream.
struct GeneratorConfig {
  enum class Type { Gaussian, Ar1, Linear, ConstantVector, Csv };
  Type type = Type::Gaussian;

  double mean = 0.0;     // gaussian
  double stddev = 1.0;   // gaussian, ar1 innovation, linear intrinsic noise
  double phi = 0.9;      // ar1

  // linear: y = intercept + slopes . inputs + N(0, noise_stddev^2)
  double intercept = 0.0;
  std::vector<double> slopes;
  std::vector<std::string> inputs;  // stream ids
  double noise_stddev = 0.1;

  Value values;  // constant_vector

  std::string csv_path;  // csv replay
  std::size_t csv_column = 0;
};

struct DemandConfig {
  enum class Type { Fixed, MarketMaker };
  Type type = Type::Fixed;
  Money scale = 1.0;
  double initial_sigma = 1.0;
};

struct StreamConfig {
  StreamSpec spec;
  GeneratorConfig generator;
  DemandConfig demand;
};

struct LatencyConfig {
  enum class Type { Constant, Exponential };
  Type type = Type::Constant;
  double ms = 100.0;  // constant value or exponential mean
};

struct AgentConfig {
  enum class Type {
    Child,
    Parent,
    Stacker,
    ErrorHelper,
    MatchingPursuit,
    External,
  };

  std::string id;
  Type type = Type::Child;
  std::string stream;  // stream this agent produces predictions for
  LatencyConfig latency;

  // child
  PrecisionModel precision;
  std::optional<PrecisionModel> advertised;  // may differ from the truth

  // parent
  std::vector<std::string> children;  // child agent ids
  enum class BudgetMode { IncomeFraction, FixedPerRound };
  BudgetMode budget_mode = BudgetMode::IncomeFraction;
  double budget_fraction = 1.0;
  Money budget_amount = 0.0;
  bool learn_rho = false;

  // stacker
  std::string helper;  // error-helper agent id, empty = no stacking
  double bias = 0.0;
  double noise_stddev = 0.0;
  Money helper_pot = 0.0;

  // matching pursuit
  std::size_t depth = 0;
  std::vector<Value> atoms;     // explicit atoms, or
  std::size_t random_atoms = 0; // generate this many unit atoms from the seed

  // external
  std::string key;  // required auth key; empty accepts any key for the name
};

struct Scenario {
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::uint64_t epoch_length = 1000;
  ScoringRule scoring;
  std::vector<StreamConfig> streams;
  std::vector<AgentConfig> agents;

  // Parses and validates; parse errors carry a line number, semantic errors
  // the offending JSON path. Throws ParseError / InvalidSpec / CyclicWiring.
  static Scenario from_json_text(const std::string& text);
  static Scenario from_file(const std::string& path);

  std::string to_json_text() const;

  void validate() const;

  // Stream indices in generator dependency order (inputs first).
  std::vector<std::size_t> stream_topo_order() const;
  // Agent indices such that every within-round dependency (parent on child
  // producers, stacker on helper) comes first.
  std::vector<std::size_t> agent_topo_order() const;

  const StreamConfig* find_stream(const std::string& id) const;
  const AgentConfig* find_agent(const std::string& id) const;
};

}  // namespace roar
