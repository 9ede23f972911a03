#pragma once

#include <optional>

#include "roar/report.hpp"
#include "roar/scenario.hpp"

namespace roar {

// Runs the scenario on simulated time: a single serialized event queue in
// strict (time, sequence) order, so identical seeds produce byte-identical
// reports.
RunReport run_scenario(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override = {});

// Leaderboard ordering from a finished report (descending payout, agent id
// breaking ties).
std::vector<std::pair<std::string, Money>> leaderboard(const RunReport& report);

}  // namespace roar
