#include "cbm/force_law.hpp"

#include <cmath>
#include <stdexcept>

namespace cbm {
namespace {

void check_distance(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::domain_error("pair distance must be finite and non-negative");
  }
}

// Antiderivative of the cubic law, shifted so that P'(r) = g(r).
double cubic_primitive(double r, double mu, double s, double r_a) {
  const double u = r - r_a;
  const double u3 = u * u * u;
  return mu * (u3 * u / 4.0 + (r_a - s) * u3 / 3.0);
}

}  // namespace

ForceLaw::ForceLaw(double mu, double s, double r_a) : mu_(mu), s_(s), r_a_(r_a) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("spring stiffness mu must be positive");
  }
  if (!(s > 0.0) || !(s < r_a) || !std::isfinite(r_a)) {
    throw std::invalid_argument("force law requires 0 < s < r_A");
  }
}

double ForceLaw::force(double r) const {
  check_distance(r);
  if (r > r_a_) return 0.0;
  const double u = r - r_a_;
  return mu_ * u * u * (r - s_);
}

double ForceLaw::force_derivative(double r) const {
  check_distance(r);
  // One-sided value at the cutoff is taken as zero.
  if (r >= r_a_) return 0.0;
  return mu_ * (r - r_a_) * (3.0 * r - 2.0 * s_ - r_a_);
}

double ForceLaw::potential(double r) const {
  check_distance(r);
  const double base = cubic_primitive(s_, mu_, s_, r_a_);
  if (r >= r_a_) return cubic_primitive(r_a_, mu_, s_, r_a_) - base;
  return cubic_primitive(r, mu_, s_, r_a_) - base;
}

double ForceLaw::potential_at_cutoff() const { return potential(r_a_); }

double cubic_force(double r, const ForceLaw& law) { return law.force(r); }

double cubic_force_derivative(double r, const ForceLaw& law) {
  return law.force_derivative(r);
}

double pair_potential(double r, const ForceLaw& law) { return law.potential(r); }

}  // namespace cbm
