#pragma once

#include <span>
#include <vector>

namespace cbm {

/// Natural cubic spline through (t_k, y_k), t strictly increasing. With two
/// knots it is the straight line, with one knot only that point can be
/// evaluated.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> t, std::vector<double> y);

  /// Throws std::out_of_range outside [t_0, t_n].
  double operator()(double tq) const;

  double front() const { return t_.front(); }
  double back() const { return t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace cbm
