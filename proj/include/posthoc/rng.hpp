#pragma once

#include <cstdint>
#include <random>

namespace posthoc {

// Deterministic random stream. Every protocol round owns one, derived from
// (master seed, round index), so results do not depend on execution order or
// worker count. Draw helpers avoid std distributions, whose output is
// implementation defined.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream for_round(std::uint64_t master_seed, std::uint64_t round_index);

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform integer in [0, n), n >= 1. Unbiased (masked for powers of two,
    /// rejection otherwise).
    std::uint64_t uniform_below(std::uint64_t n);

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace posthoc
