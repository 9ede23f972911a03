#pragma once

#include <cstdint>
#include <string_view>

namespace roar {

// Counter-based splitmix64 stream. Every agent, generator and latency draw
// owns its own Rng derived from (master seed, domain, name), so adding an
// agent to a scenario never perturbs anyone else's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in (0, 1]; never returns 0 so it is safe under log().
  double next_unit();

  // Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
  // so the state advances identically no matter how results are consumed.
  double next_normal();

  double next_exponential(double mean);

 private:
  std::uint64_t state_;
};

// Deterministic sub-stream seed: mixes the master seed with a domain tag
// ("gen", "noise", "latency", ...) and an entity name.
std::uint64_t derive_seed(std::uint64_t master, std::string_view domain,
                          std::string_view name);

}  // namespace roar
