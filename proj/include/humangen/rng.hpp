#pragma once

#include <cstdint>
#include <random>

namespace hgen {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Purposes for per-sample random streams. Each stage draws from its own
/// stream so re-running one stage reproduces the same values regardless of
/// what the other stages consumed.
enum class Stream : std::uint64_t {
  pose = 1,
  camera = 2,
  placement = 3,
  environment = 4,
  gender = 5,
  action = 6,
  point = 7,
  generator = 8,
};

/// Deterministic random stream. mt19937_64 output is pinned by the standard
/// and all value mappings are implemented here, so identical seeds give
/// bit-identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Stream for one sample of one run: mixes (global_seed, sample_index, tag).
  static Rng for_sample(std::uint64_t global_seed, std::uint64_t sample_index,
                        Stream tag) {
    std::uint64_t s = global_seed;
    std::uint64_t h = splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (sample_index + 1);
    h ^= splitmix64(s);
    s ^= 0xbf58476d1ce4e5b9ULL * (static_cast<std::uint64_t>(tag) + 1);
    h ^= splitmix64(s);
    return Rng(h);
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) { return next_u64() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hgen
