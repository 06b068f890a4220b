#pragma once

#include <cstdint>

namespace bsmm {

/// SplitMix64 step. Used to expand seeds and derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through SplitMix64.
///
/// The algorithm is fixed so generated corpora are identical on every
/// platform and can be reproduced from other languages: `uniform()` takes the
/// top 53 bits of the next output, and `split(k)` seeds a child generator from
/// `seed ^ splitmix64(k)`, so streams depend only on (seed, k).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in (-1, 1) excluding exact zero, so drawn values are always structural.
  double signed_nonzero() {
    for (;;) {
      const double v = 2.0 * uniform() - 1.0;
      if (v != 0.0 && v != -1.0) return v;
    }
  }

  /// Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next();
      const auto wide = static_cast<unsigned __int128>(x) * bound;
      if (static_cast<std::uint64_t>(wide) >= limit) return static_cast<std::uint64_t>(wide >> 64);
    }
  }

  Rng split(std::uint64_t stream) const {
    std::uint64_t k = stream;
    return Rng(seed_ ^ splitmix64(k));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace bsmm
