#include "cbm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cbm {

std::uint64_t SeededRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SeededRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

std::vector<double> random_unit_vector(SeededRng& rng, int d) {
  switch (d) {
    case 1:
      return {rng.uniform() < 0.5 ? -1.0 : 1.0};
    case 2: {
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      return {std::cos(phi), std::sin(phi)};
    }
    case 3: {
      double u, v, s;
      do {
        u = 2.0 * rng.uniform() - 1.0;
        v = 2.0 * rng.uniform() - 1.0;
        s = u * u + v * v;
      } while (s >= 1.0 || s == 0.0);
      const double w = 2.0 * std::sqrt(1.0 - s);
      return {u * w, v * w, 1.0 - 2.0 * s};
    }
    default:
      throw std::invalid_argument("dimension must be 1, 2 or 3");
  }
}

}  // namespace cbm
