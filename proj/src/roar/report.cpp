#include "roar/report.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace roar {

using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(';');
    out += format_double(v[i]);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Err::IoError, "cannot write '" + path.string() + "'");
  out << data;
  if (!out) fail(Err::IoError, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string RunReport::rounds_csv() const {
  std::string out = kRoundsCsvHeader;
  out.push_back('\n');
  for (const auto& r : rounds) {
    out += std::to_string(r.round_index);
    out.push_back(',');
    out += r.stream_id;
    out.push_back(',');
    out += r.agent;
    out.push_back(',');
    out += format_value(r.prediction);
    out.push_back(',');
    out += format_value(r.truth);
    out.push_back(',');
    out += format_double(r.payout);
    out.push_back('\n');
  }
  return out;
}

std::string RunReport::epochs_csv() const {
  std::string out = kEpochsCsvHeader;
  out.push_back('\n');
  for (const auto& e : epochs) {
    out += std::to_string(e.epoch);
    out.push_back(',');
    out += e.agent;
    out.push_back(',');
    if (e.pay_rate) out += format_double(*e.pay_rate);
    out.push_back(',');
    out += join(e.coeff_attenuated);
    out.push_back(',');
    out += join(e.coeff_deattenuated);
    out.push_back(',');
    out += join(e.gamma);
    out.push_back(',');
    if (e.mse) out += format_double(*e.mse);
    out.push_back('\n');
  }
  return out;
}

std::string RunReport::report_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["horizon"] = horizon;
  j["epoch_length"] = epoch_length;
  j["settled_rounds"] = settled_rounds;
  j["pot_charged_total"] = pot_charged_total;
  j["late_predictions"] = late_predictions;
  j["causality_violations"] = causality_violations;
  j["partial"] = partial;

  ordered_json agents = ordered_json::object();
  for (const auto& [agent, entry] : ledger.entries()) {
    ordered_json a;
    a["cumulative_payout"] = entry.cumulative;
    a["scored_rounds"] = entry.history.size();
    agents[agent] = a;
  }
  j["agents"] = agents;

  ordered_json board = ordered_json::array();
  for (const auto& [agent, payout] : leaderboard())
    board.push_back(ordered_json::array({agent, payout}));
  j["leaderboard"] = board;
  return j.dump(2) + "\n";
}

void RunReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_file(base / "report.json", report_json());
  write_file(base / "rounds.csv", rounds_csv());
  write_file(base / "epochs.csv", epochs_csv());
}

RunReport read_report(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "report.json";
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path.string() + "'");
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded())
    fail(Err::ParseError, "malformed report.json in '" + dir + "'");

  RunReport r;
  r.seed = j.value("seed", 0ull);
  r.horizon = j.value("horizon", 0ull);
  r.epoch_length = j.value("epoch_length", 0ull);
  r.settled_rounds = j.value("settled_rounds", 0ull);
  r.pot_charged_total = j.value("pot_charged_total", 0.0);
  r.late_predictions = j.value("late_predictions", 0ull);
  r.causality_violations = j.value("causality_violations", 0ull);
  r.partial = j.value("partial", false);
  if (j.contains("agents")) {
    // Cumulative totals only; per-round history stays in rounds.csv.
    for (auto it = j["agents"].begin(); it != j["agents"].end(); ++it)
      r.ledger.seed_cumulative(it.key(),
                               it.value().value("cumulative_payout", 0.0));
  }
  return r;
}

}  // namespace roar
