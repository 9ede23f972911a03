#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roar/common.hpp"

namespace roar {

// One protocol message: a single line of UTF-8 JSON, '\n'-terminated on the
// wire. Scalars travel as plain JSON numbers in shortest round-trip form;
// vector values travel as arrays.
enum class MsgType {
  Register,
  Registered,
  Question,
  Prediction,
  Truth,
  Compensation,
  Leaderboard,
  Error,
};

const char* to_string(MsgType t);

struct Message {
  MsgType type = MsgType::Error;
  std::string name;    // register
  std::string key;     // register, prediction
  std::string stream;  // question/prediction/truth/compensation context
  std::string reason;  // error
  std::optional<std::uint64_t> round;
  std::optional<Value> value;            // prediction, truth
  std::optional<Money> amount;           // compensation
  std::optional<std::int64_t> deadline_ms;  // question
  std::optional<double> advertised_rho;  // optional price signal on register
  std::vector<std::string> streams;      // register request, registered reply
  std::vector<std::pair<std::string, Money>> board;  // leaderboard reply

  bool operator==(const Message&) const = default;
};

inline constexpr std::size_t kMaxWireLine = 65536;

// Single line, no trailing newline (the transport appends it).
std::string encode(const Message& msg);

// Throws ParseError on malformed JSON, unknown type, missing required
// fields, or a line longer than kMaxWireLine bytes.
Message decode(std::string_view line);

}  // namespace roar
