#include "roar/simulator.hpp"

#include <queue>

#include "roar/world.hpp"

namespace roar {

namespace {

struct Event {
  Timestamp time = 0;
  std::uint64_t seq = 0;  // tie-breaker: schedule order, never reordered
  enum class Kind { OpenRound, Answer, Reveal } kind = Kind::OpenRound;
  std::uint64_t round = 0;
  std::string agent;   // Answer
  std::string stream;  // Answer, Reveal
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

}  // namespace

RunReport run_scenario(const Scenario& scenario,
                       std::optional<std::uint64_t> seed_override) {
  World world(scenario, seed_override);

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
  std::uint64_t seq = 0;
  auto push = [&](Event e) {
    e.seq = seq++;
    queue.push(std::move(e));
  };

  const Timestamp cadence = world.streams().front().spec.cadence_ms;
  push({0, 0, Event::Kind::OpenRound, 0, "", ""});

  while (!queue.empty()) {
    Event e = queue.top();
    queue.pop();
    switch (e.kind) {
      case Event::Kind::OpenRound: {
        auto answers = world.begin_round(e.round, e.time);
        for (const auto& a : answers)
          push({a.at, 0, Event::Kind::Answer, e.round, a.agent_id, a.stream_id});
        for (const auto& s : world.streams())
          push({e.time + s.spec.deadline_ms + 1, 0, Event::Kind::Reveal,
                e.round, "", s.spec.stream_id});
        if (e.round + 1 < world.horizon())
          push({e.time + cadence, 0, Event::Kind::OpenRound, e.round + 1, "",
                ""});
        break;
      }
      case Event::Kind::Answer:
        world.produce_answer(e.agent, e.stream, e.round, e.time);
        break;
      case Event::Kind::Reveal:
        world.reveal_and_settle(e.stream, e.round, e.time);
        break;
    }
  }
  return world.finish(false);
}

std::vector<std::pair<std::string, Money>> leaderboard(
    const RunReport& report) {
  return report.leaderboard();
}

}  // namespace roar
