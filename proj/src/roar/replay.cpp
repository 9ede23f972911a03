#include "roar/replay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "roar/report.hpp"

namespace roar {

namespace {

struct Row {
  std::uint64_t round;
  std::string stream;
  std::string agent;
  Value prediction;
  Value truth;
  Money payout;
};

Row parse_row(const std::string& line, std::uint64_t lineno) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    if (end == line.size()) break;
    start = end + 1;
  }
  if (fields.size() != 6)
    fail(Err::ParseError, "line " + std::to_string(lineno) + ": expected 6 fields, got " +
                              std::to_string(fields.size()));
  try {
    Row r;
    r.round = static_cast<std::uint64_t>(std::stoull(fields[0]));
    r.stream = fields[1];
    r.agent = fields[2];
    r.prediction = parse_value(fields[3]);
    r.truth = parse_value(fields[4]);
    r.payout = parse_double(fields[5]);
    return r;
  } catch (const std::exception& e) {
    fail(Err::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace

ReplayResult replay_rounds_csv(const std::string& path,
                               const ScoringRule& rule) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");

  ReplayResult out;
  // Per-agent sums accumulate in row order, which is settle order, so they
  // reproduce the live ledger's floating-point sums bit for bit.
  std::map<std::string, Money> cumulative;

  // One settlement group: consecutive rows sharing (round, stream).
  std::map<std::string, Value> preds;
  std::map<std::string, Money> logged;
  Value truth;
  std::uint64_t group_round = 0;
  std::string group_stream;

  auto flush = [&]() {
    if (preds.empty()) return;
    out.rounds += 1;
    Money pot = 0.0;
    for (const auto& [_, p] : logged) pot += p;
    const auto recomputed = score_round(truth, preds, pot, rule);
    for (const auto& [agent, pay] : logged) {
      auto it = recomputed.find(agent);
      if (it == recomputed.end() || std::fabs(it->second - pay) > 1e-9)
        out.mismatches += 1;
    }
    preds.clear();
    logged.clear();
  };

  std::string line;
  std::uint64_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!saw_header) {
      saw_header = true;
      if (line == kRoundsCsvHeader) continue;
      // No header is fine too; treat the first line as data.
    }
    Row r = parse_row(line, lineno);
    if (preds.empty() || r.round != group_round || r.stream != group_stream)
      flush();
    group_round = r.round;
    group_stream = r.stream;
    truth = r.truth;
    preds[r.agent] = r.prediction;
    logged[r.agent] = r.payout;
    cumulative[r.agent] += r.payout;
  }
  flush();

  out.leaderboard.reserve(cumulative.size());
  for (const auto& [agent, pay] : cumulative)
    out.leaderboard.emplace_back(agent, pay);
  std::sort(out.leaderboard.begin(), out.leaderboard.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return out;
}

}  // namespace roar
