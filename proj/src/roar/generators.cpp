#include "roar/generators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace roar {

namespace {

class GaussianGen : public Generator {
 public:
  GaussianGen(double mean, double sd, std::uint64_t seed)
      : mean_(mean), sd_(sd), rng_(seed) {}
  Value draw(std::uint64_t, const TruthLookup&) override {
    return scalar(mean_ + sd_ * rng_.next_normal());
  }

 private:
  double mean_, sd_;
  Rng rng_;
};

class Ar1Gen : public Generator {
 public:
  Ar1Gen(double phi, double sd, std::uint64_t seed)
      : phi_(phi), sd_(sd), rng_(seed) {
    // Stationary start.
    state_ = sd_ / std::sqrt(1.0 - phi_ * phi_) * rng_.next_normal();
  }
  Value draw(std::uint64_t, const TruthLookup&) override {
    const Value out = scalar(state_);
    state_ = phi_ * state_ + sd_ * rng_.next_normal();
    return out;
  }

 private:
  double phi_, sd_, state_;
  Rng rng_;
};

class LinearGen : public Generator {
 public:
  LinearGen(GeneratorConfig cfg, std::uint64_t seed)
      : cfg_(std::move(cfg)), rng_(seed) {}
  Value draw(std::uint64_t, const TruthLookup& lookup) override {
    double y = cfg_.intercept;
    for (size_t i = 0; i < cfg_.inputs.size(); ++i)
      y += cfg_.slopes[i] * scalar_of(lookup(cfg_.inputs[i]));
    if (cfg_.noise_stddev > 0.0) y += cfg_.noise_stddev * rng_.next_normal();
    return scalar(y);
  }

 private:
  GeneratorConfig cfg_;
  Rng rng_;
};

class ConstantVectorGen : public Generator {
 public:
  explicit ConstantVectorGen(Value v) : value_(std::move(v)) {}
  Value draw(std::uint64_t, const TruthLookup&) override { return value_; }

 private:
  Value value_;
};

class CsvGen : public Generator {
 public:
  CsvGen(const std::string& path, std::size_t column, std::uint64_t horizon) {
    std::ifstream in(path);
    if (!in) fail(Err::IoError, "cannot open data file '" + path + "'");
    std::string line;
    std::uint64_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::stringstream row(line);
      std::string cell;
      std::size_t col = 0;
      bool found = false;
      while (std::getline(row, cell, ',')) {
        if (col++ == column) {
          // A non-numeric first row is treated as a header.
          try {
            rows_.push_back(parse_double(cell));
          } catch (const RoarError&) {
            if (lineno == 1) break;
            fail(Err::ParseError, path + " line " + std::to_string(lineno) +
                                      ": bad number '" + cell + "'");
          }
          found = true;
          break;
        }
      }
      if (!found && lineno > 1)
        fail(Err::ParseError,
             path + " line " + std::to_string(lineno) + ": missing column " +
                 std::to_string(column));
    }
    if (rows_.size() < horizon)
      fail(Err::InvalidSpec, path + " has " + std::to_string(rows_.size()) +
                                 " rows, scenario horizon needs " +
                                 std::to_string(horizon));
  }
  Value draw(std::uint64_t round, const TruthLookup&) override {
    return scalar(rows_.at(round));
  }

 private:
  std::vector<double> rows_;
};

}  // namespace

std::unique_ptr<Generator> make_generator(const GeneratorConfig& config,
                                          const std::string& stream_id,
                                          std::uint64_t master_seed,
                                          std::uint64_t horizon) {
  const std::uint64_t seed = derive_seed(master_seed, "gen", stream_id);
  switch (config.type) {
    case GeneratorConfig::Type::Gaussian:
      return std::make_unique<GaussianGen>(config.mean, config.stddev, seed);
    case GeneratorConfig::Type::Ar1:
      return std::make_unique<Ar1Gen>(config.phi, config.stddev, seed);
    case GeneratorConfig::Type::Linear:
      return std::make_unique<LinearGen>(config, seed);
    case GeneratorConfig::Type::ConstantVector:
      return std::make_unique<ConstantVectorGen>(config.values);
    case GeneratorConfig::Type::Csv:
      return std::make_unique<CsvGen>(config.csv_path, config.csv_column,
                                      horizon);
  }
  fail(Err::InvalidSpec, "unhandled generator type");
}

}  // namespace roar
