#include "cbm/harness/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbm {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  if (t_.empty() || t_.size() != y_.size()) {
    throw std::invalid_argument("spline needs matching, non-empty knot and value arrays");
  }
  for (std::size_t k = 1; k < t_.size(); ++k) {
    if (!(t_[k] > t_[k - 1])) throw std::invalid_argument("spline knots must increase strictly");
  }
  const std::size_t n = t_.size();
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Tridiagonal system for the interior second derivatives (Thomas algorithm).
  std::vector<double> c(n, 0.0);
  std::vector<double> d(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = t_[k] - t_[k - 1];
    const double h1 = t_[k + 1] - t_[k];
    const double rhs = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
    const double diag = 2.0 * (h0 + h1) - h0 * c[k - 1];
    c[k] = h1 / diag;
    d[k] = (rhs - h0 * d[k - 1]) / diag;
  }
  for (std::size_t k = n - 2; k >= 1; --k) {
    m_[k] = d[k] - c[k] * m_[k + 1];
    if (k == 1) break;
  }
}

double NaturalCubicSpline::operator()(double tq) const {
  if (tq < t_.front() || tq > t_.back()) {
    throw std::out_of_range("spline evaluation outside the knot range");
  }
  if (t_.size() == 1) return y_[0];
  const auto it = std::upper_bound(t_.begin(), t_.end(), tq);
  std::size_t k = static_cast<std::size_t>(it - t_.begin());
  k = std::clamp<std::size_t>(k, 1, t_.size() - 1);
  const double h = t_[k] - t_[k - 1];
  const double a = (t_[k] - tq) / h;
  const double b = (tq - t_[k - 1]) / h;
  return a * y_[k - 1] + b * y_[k] +
         ((a * a * a - a) * m_[k - 1] + (b * b * b - b) * m_[k]) * h * h / 6.0;
}

}  // namespace cbm
