#pragma once

#include <atomic>
#include <cstdint>

#include "roar/report.hpp"
#include "roar/scenario.hpp"

namespace roar {

struct ServeOptions {
  std::uint16_t port = 7207;  // 0 picks an ephemeral port
  // Wall milliseconds per configured millisecond. Cadences and deadlines are
  // scaled once up front; everything downstream sees the scaled spec.
  double time_scale = 1.0;
  // Open the next round as soon as the previous one settles instead of
  // pacing by cadence. Deadlines still apply inside each round. Suits
  // zero-latency replays of recorded runs.
  bool eager = false;
};

// Hosts a scenario's streams over newline-delimited JSON on TCP. External
// producers register with a name and an auth key, receive questions, and
// compete for the configured pots; internal agents keep running as in the
// simulator. One thread owns everything: connection readers and writers,
// the round state machine, and the books. The server clock decides lateness.
//
// A round closes at its deadline, or earlier once every expected producer
// (declared external slots plus currently registered subscribers) has
// answered. The next round opens one cadence after the previous one.
class NetServer {
 public:
  // Binds immediately; throws IoError when the port is taken.
  NetServer(Scenario scenario, ServeOptions options);
  ~NetServer();

  NetServer(const NetServer&) = delete;
  NetServer& operator=(const NetServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Runs until the horizon completes or stop() is called; returns the final
  // (or partial) report.
  RunReport run();

  // Safe from other threads and signal context.
  void stop() { stop_.store(true); }

 private:
  struct Impl;
  Impl* impl_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
};

}  // namespace roar
