#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "roar/dictionary.hpp"
#include "roar/replay.hpp"
#include "roar/simulator.hpp"

using namespace roar;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(ROAR_SCENARIO_DIR) + "/" + name;
}

StreamConfig gaussian_stream(const std::string& id, Money pot,
                             std::int64_t deadline = 1500) {
  StreamConfig s;
  s.spec.stream_id = id;
  s.spec.cadence_ms = 2000;
  s.spec.deadline_ms = deadline;
  s.spec.pot = pot;
  s.generator.type = GeneratorConfig::Type::Gaussian;
  return s;
}

AgentConfig child_agent(const std::string& id, const std::string& stream,
                        double baseline = 1.0, double rho = 2.0) {
  AgentConfig a;
  a.id = id;
  a.type = AgentConfig::Type::Child;
  a.stream = stream;
  a.precision = {baseline, rho};
  a.latency.ms = 100;
  return a;
}

double epoch_mse(const RunReport& report, const std::string& agent,
                 std::uint64_t epoch) {
  for (const auto& row : report.epochs)
    if (row.agent == agent && row.epoch == epoch && row.mse) return *row.mse;
  return std::nan("");
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("a perfect child and an identity parent reach near-zero MSE") {
  Scenario sc;
  sc.seed = 31337;
  sc.horizon = 600;
  sc.epoch_length = 200;
  sc.streams.push_back(gaussian_stream("x1", 0.0, 600));
  StreamConfig y;
  y.spec.stream_id = "y";
  y.spec.cadence_ms = 2000;
  y.spec.deadline_ms = 1500;
  y.spec.pot = 1.0;
  y.generator.type = GeneratorConfig::Type::Linear;
  y.generator.slopes = {1.0};
  y.generator.inputs = {"x1"};
  y.generator.noise_stddev = 0.0;
  sc.streams.push_back(y);
  sc.agents.push_back(child_agent("c1", "x1", 1e12, 1.0));
  AgentConfig p;
  p.id = "p";
  p.type = AgentConfig::Type::Parent;
  p.stream = "y";
  p.children = {"c1"};
  p.latency.ms = 900;
  sc.agents.push_back(p);

  auto report = run_scenario(sc);
  CHECK(report.causality_violations == 0);
  CHECK(epoch_mse(report, "p", 1) < 1e-8);
  CHECK(epoch_mse(report, "p", 2) < 1e-8);
}

TEST_CASE("equal seeds produce byte-identical artifacts") {
  Scenario sc = Scenario::from_file(scenario_path("contest_three_bots.json"));
  auto a = run_scenario(sc);
  auto b = run_scenario(sc);
  CHECK(a.report_json() == b.report_json());
  CHECK(a.rounds_csv() == b.rounds_csv());
  CHECK(a.epochs_csv() == b.epochs_csv());

  auto c = run_scenario(sc, 999);  // a different seed genuinely differs
  CHECK(a.rounds_csv() != c.rounds_csv());
}

TEST_CASE("payouts conserve the charged pot") {
  auto report = run_scenario(
      Scenario::from_file(scenario_path("contest_three_bots.json")));
  double total = 0.0;
  for (const auto& row : report.rounds) total += row.payout;
  CHECK(std::fabs(total - report.pot_charged_total) < 1e-9);
  CHECK(report.settled_rounds == 500);
  CHECK(report.pot_charged_total == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(report.causality_violations == 0);
}

TEST_CASE("the leaderboard matches an independent fold over the round log") {
  Scenario sc = Scenario::from_file(scenario_path("contest_three_bots.json"));
  sc.horizon = 100;
  auto report = run_scenario(sc);

  std::map<std::string, Money> fold;
  for (const auto& row : report.rounds) fold[row.agent] += row.payout;
  auto board = leaderboard(report);
  REQUIRE(board.size() == fold.size());
  for (const auto& [agent, payout] : board)
    REQUIRE(payout == fold.at(agent));
  // sharper bots sit higher
  CHECK(board.front().first == "c1");
  CHECK(board.back().first == "c3");
}

TEST_CASE("replay of the written csv reproduces the leaderboard exactly") {
  Scenario sc = Scenario::from_file(scenario_path("contest_three_bots.json"));
  auto report = run_scenario(sc);
  const auto dir =
      std::filesystem::temp_directory_path() / "roar_replay_test";
  report.write(dir.string());

  auto replayed = replay_rounds_csv((dir / "rounds.csv").string(), sc.scoring);
  CHECK(replayed.mismatches == 0);
  auto board = leaderboard(report);
  REQUIRE(replayed.leaderboard.size() == board.size());
  for (std::size_t i = 0; i < board.size(); ++i) {
    CHECK(replayed.leaderboard[i].first == board[i].first);
    CHECK(replayed.leaderboard[i].second == board[i].second);
  }
}

TEST_CASE("within-round cycles are rejected and named") {
  Scenario sc;
  sc.seed = 1;
  sc.horizon = 10;
  sc.streams.push_back(gaussian_stream("a", 1.0));
  sc.streams.push_back(gaussian_stream("b", 1.0));
  AgentConfig p1, p2;
  p1.id = "p1";
  p1.type = AgentConfig::Type::Parent;
  p1.stream = "a";
  p1.children = {"p2"};
  p2.id = "p2";
  p2.type = AgentConfig::Type::Parent;
  p2.stream = "b";
  p2.children = {"p1"};
  sc.agents = {p1, p2};
  try {
    sc.validate();
    FAIL("expected throw");
  } catch (const RoarError& e) {
    CHECK(e.code() == Err::CyclicWiring);
    CHECK(std::string(e.what()).find("p1") != std::string::npos);
    CHECK(std::string(e.what()).find("p2") != std::string::npos);
  }
}

TEST_CASE("generator input cycles are rejected") {
  Scenario sc;
  sc.seed = 1;
  sc.horizon = 10;
  StreamConfig a = gaussian_stream("a", 1.0);
  a.generator.type = GeneratorConfig::Type::Linear;
  a.generator.slopes = {1.0};
  a.generator.inputs = {"b"};
  StreamConfig b = gaussian_stream("b", 1.0);
  b.generator.type = GeneratorConfig::Type::Linear;
  b.generator.slopes = {1.0};
  b.generator.inputs = {"a"};
  sc.streams = {a, b};
  CHECK_THROWS_AS(sc.validate(), RoarError);
}

TEST_CASE("an unresponsive external slot changes nobody else's outcome") {
  Scenario sc = Scenario::from_file(scenario_path("contest_three_bots.json"));
  sc.horizon = 120;
  auto base = run_scenario(sc);

  AgentConfig ghost;
  ghost.id = "ghost";
  ghost.type = AgentConfig::Type::External;
  ghost.stream = "s1";
  ghost.key = "kg";
  sc.agents.push_back(ghost);
  auto with_ghost = run_scenario(sc);

  for (const auto& [agent, entry] : base.ledger.entries())
    REQUIRE(with_ghost.ledger.cumulative(agent) == entry.cumulative);
  CHECK(with_ghost.ledger.cumulative("ghost") == 0.0);
}

TEST_CASE("adding an agent never perturbs anyone else's draws") {
  // Seed fan-out is per entity name, so a new competitor changes payouts
  // (the pot splits differently) but never the truths or anyone's answers.
  Scenario sc = Scenario::from_file(scenario_path("contest_three_bots.json"));
  sc.horizon = 200;
  auto base = run_scenario(sc);
  sc.agents.push_back(child_agent("c4", "s1", 1.0, 1.0));
  auto wider = run_scenario(sc);

  std::map<std::pair<std::uint64_t, std::string>, Value> base_preds, truths;
  for (const auto& row : base.rounds) {
    base_preds[{row.round_index, row.agent}] = row.prediction;
    truths[{row.round_index, row.stream_id}] = row.truth;
  }
  for (const auto& row : wider.rounds) {
    if (row.agent != "c4")
      REQUIRE(row.prediction == base_preds.at({row.round_index, row.agent}));
    REQUIRE(row.truth == truths.at({row.round_index, row.stream_id}));
  }
}

TEST_CASE("the stacked bot beats its unstacked twin") {
  auto report =
      run_scenario(Scenario::from_file(scenario_path("stacking.json")));
  CHECK(report.causality_violations == 0);
  const double stacked = epoch_mse(report, "st", 0);
  const double raw = epoch_mse(report, "un", 0);
  CHECK(stacked < raw);
  // the helper learned roughly the bias
  CHECK(raw > 0.3);      // ~0.25 bias^2 + 0.09 noise
  CHECK(stacked < 0.15);  // ~noise only
}

TEST_CASE("matching pursuit through the protocol equals the direct loop") {
  Scenario sc =
      Scenario::from_file(scenario_path("matching_pursuit.json"));
  auto report = run_scenario(sc);
  CHECK(report.causality_violations == 0);

  // Reconstruct the dictionary exactly as the world builds it.
  Rng dict_rng(derive_seed(sc.seed, "dict", "mp"));
  Dictionary dict = Dictionary::random(8, 16, dict_rng);
  const Value signal = sc.streams[0].generator.values;
  Eigen::Map<const Eigen::VectorXd> s(signal.data(), 8);

  // Direct in-memory matching pursuit, one projection per round.
  Eigen::VectorXd approx = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd residual = s;
  std::vector<Eigen::VectorXd> expected;  // prediction after each round
  expected.push_back(approx);             // round 0: nothing learned yet
  for (std::size_t depth = 0; depth < 5; ++depth) {
    auto step = matching_pursuit_step(dict, residual);
    approx += step.coefficient * dict.atoms.col(step.atom_index);
    residual = step.residual;
    expected.push_back(approx);
  }
  while (expected.size() < sc.horizon) expected.push_back(approx);

  std::vector<Value> got(sc.horizon);
  for (const auto& row : report.rounds)
    if (row.agent == "mp") got[row.round_index] = row.prediction;

  double prev_norm = std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < sc.horizon; ++k) {
    REQUIRE(got[k].size() == 8);
    for (int i = 0; i < 8; ++i)
      REQUIRE(std::fabs(got[k][i] - expected[k][i]) < 1e-10);
    const double res_norm =
        (s - Eigen::Map<const Eigen::VectorXd>(got[k].data(), 8)).norm();
    REQUIRE(res_norm <= prev_norm + 1e-12);
    prev_norm = res_norm;
  }
}

TEST_CASE("a parent can learn a lying child's true price of precision") {
  // The child sells precision cheaply (rho 0.5) but advertises it as dear
  // (rho 50). A trusting parent under-shrinks its beliefs about the child's
  // noise and mis-attenuates; a learning parent recovers the true response
  // from pay sweeps and predicts better from the third epoch on.
  auto build = [](bool learn) {
    Scenario sc;
    sc.seed = 2718;
    sc.horizon = 30000;
    sc.epoch_length = 10000;
    sc.streams.push_back(gaussian_stream("x1", 0.0, 600));
    StreamConfig y;
    y.spec.stream_id = "y";
    y.spec.cadence_ms = 2000;
    y.spec.deadline_ms = 1500;
    y.spec.pot = 1.0;
    y.generator.type = GeneratorConfig::Type::Linear;
    y.generator.slopes = {1.0};
    y.generator.inputs = {"x1"};
    y.generator.noise_stddev = 0.1;
    sc.streams.push_back(y);
    AgentConfig c = child_agent("c1", "x1", 1.0, 0.5);
    c.advertised = PrecisionModel{1.0, 50.0};
    sc.agents.push_back(c);
    AgentConfig p;
    p.id = "p";
    p.type = AgentConfig::Type::Parent;
    p.stream = "y";
    p.children = {"c1"};
    p.latency.ms = 900;
    p.learn_rho = learn;
    sc.agents.push_back(p);
    return sc;
  };
  auto trusting = run_scenario(build(false));
  auto learning = run_scenario(build(true));
  const double mse_trusting = epoch_mse(trusting, "p", 2);
  const double mse_learning = epoch_mse(learning, "p", 2);
  CHECK(mse_learning < mse_trusting - 0.01);
}

TEST_CASE("csv generators replay a file as ground truth") {
  const auto dir = std::filesystem::temp_directory_path() / "roar_csv_test";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "data.csv";
  {
    std::ofstream out(csv);
    out << "value\n";
    for (int i = 0; i < 20; ++i) out << i << ".5\n";
  }
  Scenario sc;
  sc.seed = 5;
  sc.horizon = 20;
  StreamConfig s = gaussian_stream("f", 1.0);
  s.generator.type = GeneratorConfig::Type::Csv;
  s.generator.csv_path = csv.string();
  s.generator.csv_column = 0;
  sc.streams = {s};
  sc.agents.push_back(child_agent("c", "f", 1e12, 1.0));

  auto report = run_scenario(sc);
  REQUIRE(report.rounds.size() == 20);
  for (const auto& row : report.rounds)
    REQUIRE(row.truth ==
            scalar(static_cast<double>(row.round_index) + 0.5));

  // not enough rows for a longer horizon
  sc.horizon = 21;
  CHECK_THROWS_AS(run_scenario(sc), RoarError);
}

TEST_CASE("market-maker demand keeps the economy solvent") {
  auto report =
      run_scenario(Scenario::from_file(scenario_path("market_maker.json")));
  CHECK(report.causality_violations == 0);
  CHECK(report.settled_rounds == 3000);
  CHECK(report.pot_charged_total > 0.0);
  double total = 0.0;
  for (const auto& row : report.rounds) total += row.payout;
  CHECK(std::fabs(total - report.pot_charged_total) < 1e-9);
}

TEST_CASE("ar1 generators stay stationary") {
  Scenario sc;
  sc.seed = 10;
  sc.horizon = 20000;
  StreamConfig s = gaussian_stream("r", 0.0);
  s.generator.type = GeneratorConfig::Type::Ar1;
  s.generator.phi = 0.9;
  s.generator.stddev = 1.0;
  sc.streams = {s};
  auto report = run_scenario(sc);
  (void)report;
  // Smoke check only: stationary marginal variance is 1/(1-phi^2) ~ 5.26.
  // Truths are logged only for rounds with participants, so re-run with one.
  sc.agents.push_back(child_agent("c", "r", 1e12, 1.0));
  report = run_scenario(sc);
  double sq = 0.0;
  for (const auto& row : report.rounds) sq += row.truth[0] * row.truth[0];
  const double var = sq / static_cast<double>(report.rounds.size());
  CHECK(var > 4.0);
  CHECK(var < 6.6);
}

}  // TEST_SUITE
