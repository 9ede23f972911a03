#include "roar/common.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

namespace roar {

const char* err_name(Err e) {
  switch (e) {
    case Err::DuplicateRound: return "duplicate round";
    case Err::RoundNotOpen: return "round not open";
    case Err::LateSubmission: return "late submission";
    case Err::TruthBeforeDeadline: return "truth before deadline";
    case Err::TruthAlreadyRevealed: return "truth already revealed";
    case Err::SettleBeforeTruth: return "settle before truth";
    case Err::PayoutMismatch: return "payout mismatch";
    case Err::EmptyRound: return "empty round";
    case Err::NegativeCompensation: return "negative compensation";
    case Err::EmptyChildren: return "empty children";
    case Err::NegativeBudget: return "negative budget";
    case Err::NegativeSigma: return "negative sigma";
    case Err::InsufficientData: return "insufficient data";
    case Err::SingularDesign: return "singular design";
    case Err::SingularMatrix: return "singular matrix";
    case Err::NotFitted: return "not fitted";
    case Err::DimensionMismatch: return "dimension mismatch";
    case Err::CyclicWiring: return "cyclic wiring";
    case Err::InvalidSpec: return "invalid spec";
    case Err::ParseError: return "parse error";
    case Err::DuplicateKey: return "duplicate key";
    case Err::UnknownStream: return "unknown stream";
    case Err::UnknownKey: return "unknown key";
    case Err::IoError: return "io error";
  }
  return "unknown";
}

void fail(Err code, const std::string& what) { throw RoarError(code, what); }

double scalar_of(const Value& v) {
  if (v.empty()) fail(Err::DimensionMismatch, "empty value");
  return v.front();
}

double squared_error(const Value& a, const Value& b) {
  if (a.size() != b.size())
    fail(Err::DimensionMismatch, "value dimensions differ: " +
                                     std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

bool is_finite(const Value& v) {
  if (v.empty()) return false;
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view text) {
  double out = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto r = std::from_chars(first, last, out);
  if (r.ec != std::errc{} || r.ptr != last)
    fail(Err::ParseError, "bad number: '" + std::string(text) + "'");
  return out;
}

std::string format_value(const Value& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(';');
    out += format_double(v[i]);
  }
  return out;
}

Value parse_value(std::string_view text) {
  Value out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_double(text.substr(start, end - start)));
    start = end + 1;
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace roar
