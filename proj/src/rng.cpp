#include "posthoc/rng.hpp"

namespace posthoc {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RandomStream RandomStream::for_round(std::uint64_t master_seed, std::uint64_t round_index) {
    // Two finalizer rounds decorrelate adjacent (seed, index) pairs.
    return RandomStream(splitmix64(splitmix64(master_seed) ^ splitmix64(round_index + 1)));
}

double RandomStream::uniform() {
    // 53 random bits into [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
    if (n == 0) return 0;
    if ((n & (n - 1)) == 0) return engine_() & (n - 1);
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return draw % n;
}

}  // namespace posthoc
