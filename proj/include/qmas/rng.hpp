#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace qmas {

// All randomness in the library flows through this wrapper so that a run
// is fully determined by one 64-bit seed. The generator name is recorded
// in emitted scheme bundles. uniform_below avoids std::uniform_int_distribution,
// whose output is implementation-defined.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  static std::string name() { return "mt19937_64"; }

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound) by rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace qmas
