// roar - operator front end for the ROAR engine, built purely on the C API.
//
//   roar simulate --scenario s.json --out dir [--seed N]
//   roar serve    --scenario s.json [--port P] [--out dir] [--time-scale X]
//   roar replay   --rounds rounds.csv [--variant V] [--epsilon E] [--decay D]
//   roar report   --out dir
//
// Exit codes: 0 success, 1 validation/parse trouble, 2 runtime failure.

#include <csignal>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "roar.h"

namespace {

roar_server* g_server = nullptr;

void on_signal(int) {
  if (g_server) roar_server_stop(g_server);
}

int fail_with(roar_status status) {
  std::fprintf(stderr, "roar: %s\n", roar_last_error());
  return status == ROAR_ERR_PARSE ? 1 : 2;
}

void print_leaderboard(const roar_report* rep) {
  const size_t n = roar_report_leaderboard_size(rep);
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    double payout = 0.0;
    roar_report_leaderboard_entry(rep, i, &name, &payout);
    std::printf("%zu %s %.17g\n", i + 1, name, payout);
  }
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 bool have_seed, uint64_t seed) {
  roar_scenario* sc = nullptr;
  roar_status st = roar_scenario_load(scenario_path.c_str(), &sc);
  if (st != ROAR_OK) return fail_with(st);
  if (have_seed) roar_scenario_set_seed(sc, seed);

  roar_report* rep = nullptr;
  st = roar_simulate(sc, &rep);
  roar_scenario_free(sc);
  if (st != ROAR_OK) return fail_with(st);

  st = roar_report_write(rep, out_dir.c_str());
  if (st != ROAR_OK) {
    roar_report_free(rep);
    return fail_with(st);
  }
  std::printf("settled %llu rounds, pot charged %.17g\n",
              static_cast<unsigned long long>(roar_report_settled_rounds(rep)),
              roar_report_pot_charged_total(rep));
  print_leaderboard(rep);
  roar_report_free(rep);
  return 0;
}

int cmd_serve(const std::string& scenario_path, uint16_t port,
              const std::string& out_dir, double time_scale, bool eager,
              bool have_seed, uint64_t seed) {
  roar_scenario* sc = nullptr;
  roar_status st = roar_scenario_load(scenario_path.c_str(), &sc);
  if (st != ROAR_OK) return fail_with(st);
  if (have_seed) roar_scenario_set_seed(sc, seed);

  roar_server* srv = nullptr;
  st = roar_server_start(sc, port, time_scale, eager ? 1 : 0, &srv);
  roar_scenario_free(sc);
  if (st != ROAR_OK) {
    std::fprintf(stderr, "roar: %s\n", roar_last_error());
    return 1;  // bind failure
  }
  std::printf("listening on port %u\n", roar_server_port(srv));
  std::fflush(stdout);

  g_server = srv;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  roar_report* rep = nullptr;
  st = roar_server_run(srv, &rep);
  g_server = nullptr;
  roar_server_free(srv);
  if (st != ROAR_OK) return fail_with(st);

  if (!out_dir.empty()) {
    st = roar_report_write(rep, out_dir.c_str());
    if (st != ROAR_OK) {
      roar_report_free(rep);
      return fail_with(st);
    }
  }
  if (roar_report_is_partial(rep)) std::printf("partial report\n");
  print_leaderboard(rep);
  roar_report_free(rep);
  return 0;
}

int cmd_replay(const std::string& rounds_path, const std::string& variant,
               double epsilon, double decay) {
  uint64_t mismatches = 0;
  roar_report* rep = nullptr;
  roar_status st = roar_replay(rounds_path.c_str(), variant.c_str(), epsilon,
                               decay, &mismatches, &rep);
  if (st != ROAR_OK) return fail_with(st);
  if (mismatches > 0) {
    std::fprintf(stderr,
                 "roar: %llu logged payouts disagree with the scoring rule\n",
                 static_cast<unsigned long long>(mismatches));
    roar_report_free(rep);
    return 1;
  }
  print_leaderboard(rep);
  roar_report_free(rep);
  return 0;
}

int cmd_report(const std::string& dir) {
  roar_report* rep = nullptr;
  roar_status st = roar_report_read(dir.c_str(), &rep);
  if (st != ROAR_OK) return fail_with(st);
  std::printf("settled %llu rounds, pot charged %.17g%s\n",
              static_cast<unsigned long long>(roar_report_settled_rounds(rep)),
              roar_report_pot_charged_total(rep),
              roar_report_is_partial(rep) ? " (partial)" : "");
  print_leaderboard(rep);
  roar_report_free(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ROAR micro-prediction engine"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", rounds_path;
  uint64_t seed = 0;
  bool have_seed = false;
  uint16_t port = 7207;
  double time_scale = 1.0;
  bool eager = false;
  std::string variant = "inverse_squared_error";
  double epsilon = 1e-9, decay = 0.5;

  auto* sim = app.add_subcommand("simulate", "run a scenario deterministically");
  sim->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    have_seed = true;
  });

  auto* serve = app.add_subcommand("serve", "host streams for live producers");
  serve->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  serve->add_option("--port", port, "TCP port (0 = ephemeral)");
  serve->add_option("--out", out_dir, "directory for the final report");
  serve->add_option("--time-scale", time_scale, "wall ms per configured ms");
  serve->add_flag("--eager", eager,
                  "open the next round as soon as the previous settles");
  serve->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
    have_seed = true;
  });

  auto* replay = app.add_subcommand("replay", "recompute a leaderboard from rounds.csv");
  replay->add_option("--rounds", rounds_path, "rounds.csv path")->required();
  replay->add_option("--variant", variant, "scoring variant");
  replay->add_option("--epsilon", epsilon, "inverse-squared-error regularizer");
  replay->add_option("--decay", decay, "rank-weighted decay");

  auto* report = app.add_subcommand("report", "print a stored report summary");
  report->add_option("--out", out_dir, "report directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return cmd_simulate(scenario_path, out_dir, have_seed, seed);
  if (serve->parsed())
    return cmd_serve(scenario_path, port, out_dir, time_scale, eager,
                     have_seed, seed);
  if (replay->parsed()) return cmd_replay(rounds_path, variant, epsilon, decay);
  if (report->parsed()) return cmd_report(out_dir);
  return 1;
}
