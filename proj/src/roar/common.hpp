#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace roar {

// Simulated or wall-clock milliseconds. The protocol never cares which;
// whoever drives the loop owns the clock.
using Timestamp = std::int64_t;
using Money = double;

// A prediction or ground-truth value: a flat real vector, size 1 for the
// common scalar case.
using Value = std::vector<double>;

enum class Err {
  DuplicateRound,
  RoundNotOpen,
  LateSubmission,
  TruthBeforeDeadline,
  TruthAlreadyRevealed,
  SettleBeforeTruth,
  PayoutMismatch,
  EmptyRound,
  NegativeCompensation,
  EmptyChildren,
  NegativeBudget,
  NegativeSigma,
  InsufficientData,
  SingularDesign,
  SingularMatrix,
  NotFitted,
  DimensionMismatch,
  CyclicWiring,
  InvalidSpec,
  ParseError,
  DuplicateKey,
  UnknownStream,
  UnknownKey,
  IoError,
};

const char* err_name(Err e);

class RoarError : public std::runtime_error {
 public:
  RoarError(Err code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& what);

inline Value scalar(double v) { return Value{v}; }

// First component of a value; most streams are scalar.
double scalar_of(const Value& v);

// Squared Euclidean distance; the scoring error e^2. Throws DimensionMismatch.
double squared_error(const Value& a, const Value& b);

bool is_finite(const Value& v);

// Shortest decimal that round-trips the exact double. Used everywhere a
// number is written to CSV or the wire so that replays are bit-exact.
std::string format_double(double v);
double parse_double(std::string_view text);  // ParseError on trailing junk

// Vector values serialize as ';'-joined components in CSV cells.
std::string format_value(const Value& v);
Value parse_value(std::string_view text);

}  // namespace roar
