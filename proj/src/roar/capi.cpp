#include "roar.h"

#include <string>

#include "roar/replay.hpp"
#include "roar/report.hpp"
#include "roar/scenario.hpp"
#include "roar/server.hpp"
#include "roar/simulator.hpp"

namespace {

thread_local std::string g_last_error;

roar_status status_of(const roar::RoarError& e) {
  using roar::Err;
  switch (e.code()) {
    case Err::ParseError:
    case Err::InvalidSpec:
    case Err::CyclicWiring:
    case Err::UnknownStream:
      return ROAR_ERR_PARSE;
    case Err::IoError:
      return ROAR_ERR_IO;
    default:
      return ROAR_ERR_RUNTIME;
  }
}

template <typename F>
roar_status guarded(F&& f) {
  try {
    f();
    return ROAR_OK;
  } catch (const roar::RoarError& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ROAR_ERR_RUNTIME;
  }
}

}  // namespace

struct roar_scenario {
  roar::Scenario sc;
};

struct roar_report {
  roar::RunReport rep;
  std::vector<std::pair<std::string, double>> board;

  void cache_board() { board = rep.leaderboard(); }
};

struct roar_server {
  roar::NetServer server;
  roar_server(roar::Scenario sc, roar::ServeOptions opt)
      : server(std::move(sc), opt) {}
};

extern "C" {

const char* roar_last_error(void) { return g_last_error.c_str(); }

const char* roar_version(void) { return "0.1.0"; }

roar_status roar_scenario_load(const char* path, roar_scenario** out) {
  if (!path || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new roar_scenario{roar::Scenario::from_file(path)};
  });
}

roar_status roar_scenario_parse(const char* json_text, roar_scenario** out) {
  if (!json_text || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new roar_scenario{roar::Scenario::from_json_text(json_text)};
  });
}

void roar_scenario_set_seed(roar_scenario* sc, uint64_t seed) {
  if (sc) sc->sc.seed = seed;
}

void roar_scenario_free(roar_scenario* sc) { delete sc; }

roar_status roar_simulate(const roar_scenario* sc, roar_report** out) {
  if (!sc || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    auto* rep = new roar_report{roar::run_scenario(sc->sc), {}};
    rep->cache_board();
    *out = rep;
  });
}

roar_status roar_report_write(const roar_report* rep, const char* dir) {
  if (!rep || !dir) return ROAR_ERR_INVALID_ARGUMENT;
  return guarded([&] { rep->rep.write(dir); });
}

roar_status roar_report_read(const char* dir, roar_report** out) {
  if (!dir || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    auto* rep = new roar_report{roar::read_report(dir), {}};
    rep->cache_board();
    *out = rep;
  });
}

size_t roar_report_leaderboard_size(const roar_report* rep) {
  return rep ? rep->board.size() : 0;
}

roar_status roar_report_leaderboard_entry(const roar_report* rep, size_t i,
                                          const char** name, double* payout) {
  if (!rep || i >= rep->board.size()) return ROAR_ERR_INVALID_ARGUMENT;
  if (name) *name = rep->board[i].first.c_str();
  if (payout) *payout = rep->board[i].second;
  return ROAR_OK;
}

uint64_t roar_report_settled_rounds(const roar_report* rep) {
  return rep ? rep->rep.settled_rounds : 0;
}

double roar_report_pot_charged_total(const roar_report* rep) {
  return rep ? rep->rep.pot_charged_total : 0.0;
}

uint64_t roar_report_causality_violations(const roar_report* rep) {
  return rep ? rep->rep.causality_violations : 0;
}

int roar_report_is_partial(const roar_report* rep) {
  return rep && rep->rep.partial ? 1 : 0;
}

void roar_report_free(roar_report* rep) { delete rep; }

roar_status roar_replay(const char* rounds_csv_path, const char* variant,
                        double epsilon, double rank_decay,
                        uint64_t* mismatches, roar_report** out) {
  if (!rounds_csv_path || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    roar::ScoringRule rule;
    if (variant && std::string(variant) == "rank_weighted")
      rule.variant = roar::ScoringVariant::RankWeighted;
    else if (variant && std::string(variant) != "inverse_squared_error")
      roar::fail(roar::Err::InvalidSpec,
                 "unknown scoring variant '" + std::string(variant) + "'");
    if (epsilon > 0.0) rule.epsilon = epsilon;
    if (rank_decay > 0.0 && rank_decay < 1.0) rule.rank_decay = rank_decay;

    auto result = roar::replay_rounds_csv(rounds_csv_path, rule);
    if (mismatches) *mismatches = result.mismatches;
    auto* rep = new roar_report{};
    for (const auto& [agent, pay] : result.leaderboard) {
      rep->rep.ledger.seed_cumulative(agent, pay);
      rep->board.emplace_back(agent, pay);
    }
    *out = rep;
  });
}

roar_status roar_server_start(const roar_scenario* sc, uint16_t port,
                              double time_scale, int eager_rounds,
                              roar_server** out) {
  if (!sc || !out) return ROAR_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    roar::ServeOptions opt;
    opt.port = port;
    opt.time_scale = time_scale > 0.0 ? time_scale : 1.0;
    opt.eager = eager_rounds != 0;
    *out = new roar_server(sc->sc, opt);
  });
}

uint16_t roar_server_port(const roar_server* srv) {
  return srv ? srv->server.port() : 0;
}

roar_status roar_server_run(roar_server* srv, roar_report** final_report) {
  if (!srv) return ROAR_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto rep = srv->server.run();
    if (final_report) {
      auto* out = new roar_report{std::move(rep), {}};
      out->cache_board();
      *final_report = out;
    }
  });
}

void roar_server_stop(roar_server* srv) {
  if (srv) srv->server.stop();
}

void roar_server_free(roar_server* srv) { delete srv; }

}  // extern "C"
