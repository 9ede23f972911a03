#include "roar/wire.hpp"

#include <json.hpp>

namespace roar {

using nlohmann::ordered_json;

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::Register: return "register";
    case MsgType::Registered: return "registered";
    case MsgType::Question: return "question";
    case MsgType::Prediction: return "prediction";
    case MsgType::Truth: return "truth";
    case MsgType::Compensation: return "compensation";
    case MsgType::Leaderboard: return "leaderboard";
    case MsgType::Error: return "error";
  }
  return "?";
}

namespace {

std::optional<MsgType> type_from(const std::string& s) {
  if (s == "register") return MsgType::Register;
  if (s == "registered") return MsgType::Registered;
  if (s == "question") return MsgType::Question;
  if (s == "prediction") return MsgType::Prediction;
  if (s == "truth") return MsgType::Truth;
  if (s == "compensation") return MsgType::Compensation;
  if (s == "leaderboard") return MsgType::Leaderboard;
  if (s == "error") return MsgType::Error;
  return std::nullopt;
}

ordered_json value_to_json(const Value& v) {
  if (v.size() == 1) return v.front();
  ordered_json arr = ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Value value_from_json(const ordered_json& j) {
  Value v;
  if (j.is_number()) {
    v.push_back(j.get<double>());
  } else if (j.is_array() && !j.empty()) {
    for (const auto& x : j) {
      if (!x.is_number()) fail(Err::ParseError, "value array must be numeric");
      v.push_back(x.get<double>());
    }
  } else {
    fail(Err::ParseError, "value must be a number or non-empty array");
  }
  return v;
}

}  // namespace

std::string encode(const Message& msg) {
  ordered_json j;
  j["type"] = to_string(msg.type);
  if (!msg.name.empty()) j["name"] = msg.name;
  if (!msg.key.empty()) j["key"] = msg.key;
  if (!msg.stream.empty()) j["stream"] = msg.stream;
  if (msg.round) j["round"] = *msg.round;
  if (msg.deadline_ms) j["deadline_ms"] = *msg.deadline_ms;
  if (msg.value) j["value"] = value_to_json(*msg.value);
  if (msg.amount) j["amount"] = *msg.amount;
  if (msg.advertised_rho) j["rho"] = *msg.advertised_rho;
  if (!msg.streams.empty()) j["streams"] = msg.streams;
  if (!msg.board.empty()) {
    ordered_json board = ordered_json::array();
    for (const auto& [name, pay] : msg.board)
      board.push_back(ordered_json::array({name, pay}));
    j["board"] = board;
  }
  if (!msg.reason.empty()) j["reason"] = msg.reason;
  return j.dump();
}

Message decode(std::string_view line) {
  if (line.size() > kMaxWireLine)
    fail(Err::ParseError, "line exceeds " + std::to_string(kMaxWireLine) +
                              " bytes");
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(Err::ParseError, "not a JSON object");
  if (!j.contains("type") || !j["type"].is_string())
    fail(Err::ParseError, "missing 'type'");
  auto type = type_from(j["type"].get<std::string>());
  if (!type)
    fail(Err::ParseError, "unknown type '" + j["type"].get<std::string>() + "'");

  Message m;
  m.type = *type;
  auto str = [&](const char* field, std::string Message::* dst, bool required) {
    if (j.contains(field)) {
      if (!j[field].is_string()) fail(Err::ParseError, std::string("'") + field + "' must be a string");
      m.*dst = j[field].get<std::string>();
    } else if (required) {
      fail(Err::ParseError, std::string("missing '") + field + "'");
    }
  };

  const bool needs_round = m.type == MsgType::Question ||
                           m.type == MsgType::Prediction ||
                           m.type == MsgType::Truth ||
                           m.type == MsgType::Compensation;
  str("name", &Message::name, m.type == MsgType::Register);
  str("key", &Message::key, m.type == MsgType::Register ||
                                m.type == MsgType::Prediction);
  str("stream", &Message::stream, needs_round);
  str("reason", &Message::reason, m.type == MsgType::Error);

  if (j.contains("round")) {
    if (!j["round"].is_number_unsigned())
      fail(Err::ParseError, "'round' must be a non-negative integer");
    m.round = j["round"].get<std::uint64_t>();
  } else if (needs_round) {
    fail(Err::ParseError, "missing 'round'");
  }

  if (j.contains("deadline_ms")) {
    if (!j["deadline_ms"].is_number_integer())
      fail(Err::ParseError, "'deadline_ms' must be an integer");
    m.deadline_ms = j["deadline_ms"].get<std::int64_t>();
  } else if (m.type == MsgType::Question) {
    fail(Err::ParseError, "missing 'deadline_ms'");
  }

  if (j.contains("value")) {
    m.value = value_from_json(j["value"]);
  } else if (m.type == MsgType::Prediction || m.type == MsgType::Truth) {
    fail(Err::ParseError, "missing 'value'");
  }

  if (j.contains("amount")) {
    if (!j["amount"].is_number())
      fail(Err::ParseError, "'amount' must be a number");
    m.amount = j["amount"].get<double>();
  } else if (m.type == MsgType::Compensation) {
    fail(Err::ParseError, "missing 'amount'");
  }

  if (j.contains("rho")) {
    if (!j["rho"].is_number()) fail(Err::ParseError, "'rho' must be a number");
    m.advertised_rho = j["rho"].get<double>();
  }

  if (j.contains("streams")) {
    if (!j["streams"].is_array())
      fail(Err::ParseError, "'streams' must be an array");
    for (const auto& s : j["streams"]) {
      if (!s.is_string()) fail(Err::ParseError, "stream names must be strings");
      m.streams.push_back(s.get<std::string>());
    }
  }

  if (j.contains("board")) {
    if (!j["board"].is_array()) fail(Err::ParseError, "'board' must be an array");
    for (const auto& row : j["board"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_string() ||
          !row[1].is_number())
        fail(Err::ParseError, "board rows must be [name, payout]");
      m.board.emplace_back(row[0].get<std::string>(), row[1].get<double>());
    }
  }
  return m;
}

}  // namespace roar
