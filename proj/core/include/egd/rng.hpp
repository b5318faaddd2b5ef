//
// Project egd - Copyright 2026 the egd developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EGD_RNG_HPP
#define EGD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace egd {

// Stream phases used when deriving per-(generation, individual) streams from
// the master seed. Checkpoints only need (seed, generation) to reproduce every
// stream, which is what makes resume bit-identical.
enum class StreamPhase : std::uint64_t {
  kInit = 1,
  kTournament = 2,
  kParentNoise = 3,
  kCrossover = 4,
  kInjection = 5,
  kDenoise = 6,
  kDataset = 7,
  kBench = 8,
};

inline std::uint64_t splitmix64(std::uint64_t &state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and a tag path. Used for
/// counter-based stream splitting: every phase of every generation gets an
/// independent stream addressed by (seed, tags...).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = master;
  (void)splitmix64(s);
  for (std::uint64_t t : tags) {
    s ^= t + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
    (void)splitmix64(s);
  }
  return splitmix64(s);
}

/// Deterministic random stream. Distribution draws are implemented from raw
/// engine output (no hidden distribution state), so a stream's sequence is a
/// pure function of its seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampled.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % span);
  }

  bool bernoulli(double p = 0.5) { return uniform() < p; }

  /// Standard normal via Box-Muller on two fresh uniforms (no cached spare).
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

private:
  std::mt19937_64 engine_;
};

inline Rng derive_rng(std::uint64_t master,
                      std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(master, tags));
}

}  // namespace egd

#endif  // EGD_RNG_HPP
