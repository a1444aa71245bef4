#pragma once

#include <cstdint>
#include <vector>

namespace kgprox {

// Small, portable PRNG. Every randomized metric derives one independent
// stream per iteration from (seed, iteration index), so results do not
// depend on how iterations are scheduled across threads.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound > 0. Rejection sampling keeps the draw
  // unbiased and identical on every platform.
  uint64_t below(uint64_t bound) {
    uint64_t x, r;
    do {
      x = next();
      r = x % bound;
    } while (x - r > ~uint64_t{0} - (bound - 1));
    return r;
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline uint64_t mix_stream(uint64_t seed, uint64_t stream) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return g.next();
}

// k distinct indices from [0, n), sorted. Floyd's algorithm.
std::vector<uint32_t> sample_without_replacement(SplitMix64& rng, uint32_t n,
                                                 uint32_t k);

} // namespace kgprox
