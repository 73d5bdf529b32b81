#pragma once

namespace cbm {

/// Cubic pairwise force strength g(r) = mu (r - r_A)^2 (r - s) on [0, r_A],
/// zero beyond the interaction cutoff. Lengths are in cell diameters.
///
/// g is repulsive (negative) below the rest length s, attractive on (s, r_A)
/// and identically zero from r_A on.
class ForceLaw {
 public:
  ForceLaw() = default;
  /// Throws std::invalid_argument unless mu > 0 and 0 < s < r_A.
  ForceLaw(double mu, double s, double r_a);

  double mu() const { return mu_; }
  double rest_length() const { return s_; }
  double cutoff() const { return r_a_; }

  /// Force strength g(r).
  double force(double r) const;
  /// g'(r); zero at and beyond the cutoff.
  double force_derivative(double r) const;
  /// Pair potential G(r) = integral of g from s to r, constant G_A past r_A.
  double potential(double r) const;
  /// G_A, the potential of a pair that does not interact.
  double potential_at_cutoff() const;

 private:
  double mu_ = 5.7;
  double s_ = 1.0;
  double r_a_ = 1.5;
};

double cubic_force(double r, const ForceLaw& law);
double cubic_force_derivative(double r, const ForceLaw& law);
double pair_potential(double r, const ForceLaw& law);

}  // namespace cbm
