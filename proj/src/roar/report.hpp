#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roar/common.hpp"
#include "roar/ledger.hpp"

namespace roar {

struct RoundRow {
  std::uint64_t round_index = 0;
  std::string stream_id;
  std::string agent;
  Value prediction;
  Value truth;
  Money payout = 0.0;
  Money pot_charged = 0.0;  // the whole round's charged pot; not in the CSV

  bool operator==(const RoundRow&) const = default;
};

struct EpochRow {
  std::uint64_t epoch = 0;
  std::string agent;
  std::optional<Money> pay_rate;       // children: per-round rate in force
  std::vector<double> coeff_attenuated;    // parents
  std::vector<double> coeff_deattenuated;  // parents
  std::vector<double> gamma;               // parents
  std::optional<double> mse;

  bool operator==(const EpochRow&) const = default;
};

// Everything a run produces. Serialization is deterministic: identical
// reports serialize to identical bytes.
struct RunReport {
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::uint64_t epoch_length = 0;
  std::vector<RoundRow> rounds;
  std::vector<EpochRow> epochs;
  Ledger ledger;
  std::uint64_t settled_rounds = 0;
  Money pot_charged_total = 0.0;
  std::uint64_t late_predictions = 0;
  std::uint64_t causality_violations = 0;
  bool partial = false;  // interrupted serve runs

  std::vector<std::pair<std::string, Money>> leaderboard() const {
    return ledger.leaderboard();
  }

  std::string rounds_csv() const;
  std::string epochs_csv() const;
  std::string report_json() const;

  // Writes report.json, rounds.csv, epochs.csv into dir (created if needed).
  void write(const std::string& dir) const;
};

// Reads back the summary written by write(); only report.json is consulted.
// Round rows and epoch rows are not reloaded.
RunReport read_report(const std::string& dir);

inline const char* kRoundsCsvHeader = "round,stream,agent,prediction,truth,payout";
inline const char* kEpochsCsvHeader = "epoch,agent,c,bhat,btilde,gamma,mse";

}  // namespace roar
