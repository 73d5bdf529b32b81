#pragma once

#include <cstdint>
#include <vector>

namespace cbm {

/// SplitMix64: state += 0x9E3779B97F4A7C15, then the output is the state
/// mixed by two xor-shift-multiply rounds (constants 0xBF58476D1CE4E5B9 and
/// 0x94D049BB133111EB, shifts 30, 27, 31). Streams are identical on every
/// platform for a given seed.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next();
  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform();
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Uniformly distributed unit vector. d = 3 uses Marsaglia's rejection
/// method, d = 2 a uniform angle, d = 1 a random sign.
std::vector<double> random_unit_vector(SeededRng& rng, int d);

}  // namespace cbm
