#include "roar/server.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <vector>

#include "roar/log.hpp"
#include "roar/wire.hpp"
#include "roar/world.hpp"

namespace roar {

namespace {

constexpr std::size_t kWriteBufferCap = 262144;
constexpr std::size_t kReadChunk = 16384;

Timestamp now_ms() {
  timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return static_cast<Timestamp>(ts.tv_sec) * 1000 +
         static_cast<Timestamp>(ts.tv_nsec) / 1000000;
}

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

Scenario scale_times(Scenario sc, double scale) {
  if (scale == 1.0) return sc;
  for (auto& s : sc.streams) {
    auto& spec = s.spec;
    spec.cadence_ms = std::max<std::int64_t>(
        3, static_cast<std::int64_t>(std::llround(spec.cadence_ms * scale)));
    spec.deadline_ms = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(spec.deadline_ms * scale)));
    // Keep room for the synthesized error round (deadline + 1 < cadence).
    if (spec.deadline_ms + 2 > spec.cadence_ms)
      spec.cadence_ms = spec.deadline_ms + 2;
  }
  return sc;
}

}  // namespace

struct NetServer::Impl {
  World world;
  std::atomic<bool>* stop = nullptr;
  int listen_fd = -1;
  bool eager = false;

  struct Conn {
    std::string rbuf, wbuf;
    bool discard_line = false;  // oversize line: skip until newline
    bool flagged = false;       // write buffer overflowed at least once
    bool dead = false;
    bool registered = false;
    std::string name, key;
    std::set<std::string> streams;
  };
  std::map<int, Conn> conns;
  std::set<std::string> active_keys;
  std::map<std::string, int> name_to_fd;

  // Round-in-flight bookkeeping.
  std::uint64_t round = 0;
  Timestamp round_opened_at = 0;
  bool round_open = false;
  std::map<std::string, std::set<std::string>> expected_ext;  // per stream
  std::map<std::string, std::set<std::string>> answered_ext;
  std::map<std::string, int> pending_internal;
  std::vector<std::pair<std::string, std::string>> deferred;  // agent, stream
  std::set<std::string> settled_streams;

  explicit Impl(Scenario sc) : world(std::move(sc), std::nullopt) {}

  // ---- transport ----------------------------------------------------------

  bool send(int fd, const Message& msg) {
    auto it = conns.find(fd);
    if (it == conns.end() || it->second.dead) return false;
    Conn& c = it->second;
    std::string line = encode(msg);
    line.push_back('\n');
    if (c.wbuf.size() + line.size() > kWriteBufferCap) {
      // Bounded buffers: drop and flag rather than block the loop.
      if (!c.flagged) {
        c.flagged = true;
        log_warn("connection '" + c.name + "': write buffer full, dropping");
      }
      return false;
    }
    c.wbuf += line;
    return true;
  }

  // Returns how many live subscribers were handed the message.
  std::size_t broadcast(const std::string& stream, const Message& msg) {
    std::size_t notified = 0;
    for (auto& [fd, c] : conns)
      if (c.registered && c.streams.count(stream))
        notified += send(fd, msg) ? 1 : 0;
    return notified;
  }

  void flush(int fd, Conn& c) {
    while (!c.wbuf.empty()) {
      const ssize_t n = ::send(fd, c.wbuf.data(), c.wbuf.size(), MSG_NOSIGNAL);
      if (n > 0) {
        c.wbuf.erase(0, static_cast<std::size_t>(n));
      } else if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
        return;
      } else {
        c.dead = true;
        return;
      }
    }
  }

  void drop_dead() {
    for (auto it = conns.begin(); it != conns.end();) {
      if (it->second.dead) {
        if (it->second.registered) {
          active_keys.erase(it->second.key);
          name_to_fd.erase(it->second.name);
        }
        ::close(it->first);
        it = conns.erase(it);
      } else {
        ++it;
      }
    }
  }

  // ---- rounds -------------------------------------------------------------

  // When the scenario declares external producer slots, the contest waits
  // for that roster to register before round 0 opens; otherwise a slow
  // starter would miss the first rounds and replays would diverge.
  bool roster_ready() const {
    for (const auto& s : world.streams())
      for (const auto& name : world.external_agents(s.spec.stream_id))
        if (!name_to_fd.count(name)) return false;
    return true;
  }

  void open_round(Timestamp now) {
    round_opened_at = now;
    round_open = true;
    expected_ext.clear();
    answered_ext.clear();
    pending_internal.clear();
    deferred.clear();
    settled_streams.clear();

    auto schedule = world.begin_round(round, now);

    for (const auto& s : world.streams()) {
      const std::string& id = s.spec.stream_id;
      auto& expected = expected_ext[id];
      for (const auto& name : world.external_agents(id)) expected.insert(name);
      for (const auto& [fd, c] : conns)
        if (c.registered && c.streams.count(id)) expected.insert(c.name);
      Message q;
      q.type = MsgType::Question;
      q.stream = id;
      q.round = round;
      q.deadline_ms = s.spec.deadline_ms;
      const std::size_t notified = broadcast(id, q);
      log_debug("round " + std::to_string(round) + " of '" + id +
                "': notified " + std::to_string(notified) + " producers");
    }

    // Internal producers answer now, except consumers that must wait for
    // streams with external producers to close first.
    for (const auto& a : schedule) {
      if (needs_deferral(a.agent_id)) {
        deferred.emplace_back(a.agent_id, a.stream_id);
        pending_internal[a.stream_id] += 1;
      } else {
        world.produce_answer(a.agent_id, a.stream_id, round, now);
      }
    }
    try_settle(now);
  }

  bool needs_deferral(const std::string& agent_id) {
    const AgentConfig* cfg = world.scenario().find_agent(agent_id);
    if (!cfg || cfg->type != AgentConfig::Type::Parent) return false;
    for (const auto& child_id : cfg->children) {
      const AgentConfig* child = world.scenario().find_agent(child_id);
      if (!child) continue;
      const auto& stream = child->stream;
      if (!expected_ext[stream].empty() && !settled_streams.count(stream))
        return true;
    }
    return false;
  }

  bool stream_ready(const StreamConfig& s, Timestamp now) {
    const std::string& id = s.spec.stream_id;
    if (settled_streams.count(id)) return false;
    const Round* r = world.current_round(id);
    if (!r) return false;

    // Stacker error streams resolve only after their source stream.
    if (!world.scenario().find_stream(id)) {
      const std::string source = id.substr(0, id.rfind(".err"));
      const AgentConfig* stacker = world.scenario().find_agent(source);
      if (stacker && !settled_streams.count(stacker->stream)) return false;
    }

    if (now > r->deadline_at) return true;
    if (pending_internal[id] > 0) return false;
    const auto& expected = expected_ext[id];
    const auto& answered = answered_ext[id];
    for (const auto& name : expected)
      if (!answered.count(name)) return false;
    return true;  // everyone expected has answered; close early
  }

  void try_settle(Timestamp now) {
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (const auto& s : world.streams()) {
        if (!round_open) break;
        if (!stream_ready(s, now)) continue;
        const std::string& id = s.spec.stream_id;
        const Round* r = world.current_round(id);
        if (r && r->state == RoundState::Open && now <= r->deadline_at)
          world.close_stream_round(id, now);
        auto rec = world.reveal_and_settle(id, round, now);
        settled_streams.insert(id);
        progressed = true;

        Message truth;
        truth.type = MsgType::Truth;
        truth.stream = id;
        truth.round = round;
        truth.value = rec.truth;
        broadcast(id, truth);
        for (const auto& [agent, amount] : rec.payouts) {
          auto fd = name_to_fd.find(agent);
          if (fd == name_to_fd.end()) continue;
          Message comp;
          comp.type = MsgType::Compensation;
          comp.stream = id;
          comp.round = round;
          comp.amount = amount;
          send(fd->second, comp);
        }

        // Unblock parents waiting on this stream.
        for (auto it = deferred.begin(); it != deferred.end();) {
          if (!needs_deferral(it->first)) {
            pending_internal[it->second] -= 1;
            world.produce_answer(it->first, it->second, round, now);
            it = deferred.erase(it);
          } else {
            ++it;
          }
        }
      }
      if (settled_streams.size() == world.streams().size()) {
        round_open = false;
        break;
      }
    }
  }

  // ---- messages -----------------------------------------------------------

  void reply_error(int fd, const std::string& reason, const Message& context) {
    Message err;
    err.type = MsgType::Error;
    err.reason = reason;
    err.stream = context.stream;
    err.round = context.round;
    send(fd, err);
  }

  void handle_register(int fd, Conn& c, const Message& m) {
    if (c.registered) {
      reply_error(fd, "already registered", m);
      return;
    }
    if (m.name.empty() || m.key.empty()) {
      reply_error(fd, "name and key required", m);
      return;
    }
    if (active_keys.count(m.key)) {
      reply_error(fd, "duplicate key", m);
      return;
    }
    if (name_to_fd.count(m.name)) {
      reply_error(fd, "duplicate name", m);
      return;
    }
    for (const auto& s : m.streams) {
      if (!world.has_stream(s)) {
        reply_error(fd, "unknown stream", m);
        return;
      }
    }
    // A declared external slot with a configured key only accepts that key.
    const AgentConfig* slot = world.scenario().find_agent(m.name);
    if (slot && slot->type == AgentConfig::Type::External &&
        !slot->key.empty() && slot->key != m.key) {
      reply_error(fd, "auth", m);
      return;
    }
    c.registered = true;
    c.name = m.name;
    c.key = m.key;
    c.streams.insert(m.streams.begin(), m.streams.end());
    active_keys.insert(m.key);
    name_to_fd[m.name] = fd;
    if (m.advertised_rho)
      log_info("producer '" + m.name + "' advertises rho=" +
               format_double(*m.advertised_rho));

    Message ok;
    ok.type = MsgType::Registered;
    ok.streams.assign(c.streams.begin(), c.streams.end());
    send(fd, ok);
  }

  void handle_prediction(int fd, Conn& c, const Message& m, Timestamp now) {
    if (!c.registered || m.key != c.key) {
      reply_error(fd, "auth", m);
      return;
    }
    if (!c.streams.count(m.stream)) {
      reply_error(fd, "not subscribed", m);
      return;
    }
    try {
      world.inject_prediction(c.name, m.stream, *m.round, *m.value, now);
      answered_ext[m.stream].insert(c.name);
      try_settle(now);
    } catch (const RoarError& e) {
      switch (e.code()) {
        case Err::LateSubmission:
        case Err::RoundNotOpen:
          reply_error(fd, "late", m);
          break;
        case Err::UnknownStream:
          reply_error(fd, "unknown stream", m);
          break;
        default:
          reply_error(fd, "parse", m);
          break;
      }
    }
  }

  void handle_line(int fd, Conn& c, const std::string& line, Timestamp now) {
    Message m;
    try {
      m = decode(line);
    } catch (const RoarError&) {
      reply_error(fd, "parse", Message{});
      return;
    }
    switch (m.type) {
      case MsgType::Register:
        handle_register(fd, c, m);
        break;
      case MsgType::Prediction:
        handle_prediction(fd, c, m, now);
        break;
      case MsgType::Leaderboard: {
        Message reply;
        reply.type = MsgType::Leaderboard;
        reply.board = world.ledger().leaderboard();
        send(fd, reply);
        break;
      }
      default:
        reply_error(fd, "unexpected type", m);
        break;
    }
  }

  void read_conn(int fd, Conn& c, Timestamp now) {
    char buf[kReadChunk];
    const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
    if (n == 0 || (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK)) {
      c.dead = true;
      return;
    }
    if (n < 0) return;
    c.rbuf.append(buf, static_cast<std::size_t>(n));

    std::size_t start = 0;
    while (true) {
      const std::size_t nl = c.rbuf.find('\n', start);
      if (nl == std::string::npos) break;
      if (c.discard_line) {
        c.discard_line = false;  // oversize line finally ended
      } else {
        std::string line = c.rbuf.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) handle_line(fd, c, line, now);
      }
      start = nl + 1;
    }
    c.rbuf.erase(0, start);
    if (c.rbuf.size() > kMaxWireLine) {
      reply_error(fd, "parse", Message{});
      c.rbuf.clear();
      c.discard_line = true;
    }
  }
};

NetServer::NetServer(Scenario scenario, ServeOptions options)
    : impl_(new Impl(scale_times(std::move(scenario), options.time_scale))) {
  impl_->stop = &stop_;
  impl_->eager = options.eager;

  impl_->listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (impl_->listen_fd < 0) fail(Err::IoError, "socket() failed");
  const int one = 1;
  setsockopt(impl_->listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(options.port);
  if (::bind(impl_->listen_fd, reinterpret_cast<sockaddr*>(&addr),
             sizeof(addr)) != 0) {
    ::close(impl_->listen_fd);
    impl_->listen_fd = -1;
    fail(Err::IoError,
         "cannot bind port " + std::to_string(options.port) + ": " +
             std::strerror(errno));
  }
  if (::listen(impl_->listen_fd, 64) != 0) {
    ::close(impl_->listen_fd);
    impl_->listen_fd = -1;
    fail(Err::IoError, "listen() failed");
  }
  socklen_t len = sizeof(addr);
  getsockname(impl_->listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  set_nonblocking(impl_->listen_fd);
  log_info("serving on port " + std::to_string(port_));
}

NetServer::~NetServer() {
  if (impl_->listen_fd >= 0) ::close(impl_->listen_fd);
  for (auto& [fd, c] : impl_->conns) ::close(fd);
  delete impl_;
}

RunReport NetServer::run() {
  Impl& im = *impl_;
  const Timestamp cadence = im.world.streams().front().spec.cadence_ms;

  Timestamp now = now_ms();
  Timestamp next_open = now;
  bool interrupted = false;
  bool started = false;

  while (true) {
    if (stop_.load()) {
      interrupted = true;
      break;
    }
    now = now_ms();

    if (!started && im.roster_ready()) {
      started = true;
      next_open = now;
    }

    // Advance past a fully settled round before anything may reopen it.
    if (!im.round_open && !im.settled_streams.empty()) {
      im.round += 1;
      im.settled_streams.clear();
      if (im.round >= im.world.horizon()) break;  // horizon reached
      if (im.eager) next_open = now;
    }
    if (started && !im.round_open && im.settled_streams.empty() &&
        im.round < im.world.horizon() && now >= next_open) {
      im.open_round(now);
      next_open = now + cadence;
    }
    if (im.round_open) im.try_settle(now);

    // Poll timeout: next deadline or next open, capped for responsiveness.
    Timestamp wake = next_open;
    if (im.round_open)
      for (const auto& s : im.world.streams()) {
        const Round* r = im.world.current_round(s.spec.stream_id);
        if (r && r->state == RoundState::Open)
          wake = std::min(wake, r->deadline_at + 1);
      }
    int timeout = static_cast<int>(std::clamp<Timestamp>(wake - now, 0, 50));

    std::vector<pollfd> fds;
    fds.push_back({im.listen_fd, POLLIN, 0});
    for (auto& [fd, c] : im.conns)
      fds.push_back({fd, static_cast<short>(POLLIN | (c.wbuf.empty() ? 0 : POLLOUT)), 0});
    ::poll(fds.data(), fds.size(), timeout);
    now = now_ms();

    if (fds[0].revents & POLLIN) {
      while (true) {
        const int cfd = ::accept(im.listen_fd, nullptr, nullptr);
        if (cfd < 0) break;
        set_nonblocking(cfd);
        const int one = 1;
        setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        im.conns[cfd];
      }
    }
    for (std::size_t i = 1; i < fds.size(); ++i) {
      auto it = im.conns.find(fds[i].fd);
      if (it == im.conns.end()) continue;
      if (fds[i].revents & (POLLERR | POLLHUP)) it->second.dead = true;
      if (!it->second.dead && (fds[i].revents & POLLIN))
        im.read_conn(fds[i].fd, it->second, now);
      if (!it->second.dead && (fds[i].revents & POLLOUT))
        im.flush(fds[i].fd, it->second);
    }
    // Opportunistic flush for anything queued this iteration.
    for (auto& [fd, c] : im.conns)
      if (!c.dead && !c.wbuf.empty()) im.flush(fd, c);
    im.drop_dead();
  }

  log_info(interrupted ? "interrupted; writing partial report"
                       : "horizon reached");
  return im.world.finish(interrupted);
}

}  // namespace roar
