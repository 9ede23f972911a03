#pragma once

#include <functional>
#include <memory>
#include <string>

#include "roar/common.hpp"
#include "roar/rng.hpp"
#include "roar/scenario.hpp"

namespace roar {

// Access to the current round's already-drawn truths of other streams, for
// derived generators. Streams are drawn in dependency order.
using TruthLookup = std::function<const Value&(const std::string& stream_id)>;

class Generator {
 public:
  virtual ~Generator() = default;
  virtual Value draw(std::uint64_t round, const TruthLookup& lookup) = 0;
};

// Builds the generator for one stream; CSV generators load eagerly and must
// cover `horizon` rows. Each generator seeds its own RNG sub-stream.
std::unique_ptr<Generator> make_generator(const GeneratorConfig& config,
                                          const std::string& stream_id,
                                          std::uint64_t master_seed,
                                          std::uint64_t horizon);

}  // namespace roar
