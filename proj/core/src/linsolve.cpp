#include "cbm/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbm {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void LinearOperator::apply(std::span<const double> v, std::span<double> out) const {
  a_->apply(v, out);
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] - dt_ * out[k];
}

GmresResult gmres_solve(const ApplyFn& op, std::span<const double> rhs, const GmresOptions& opts) {
  if (opts.max_iter < 1) throw std::invalid_argument("GMRES needs at least one iteration");
  const std::size_t n = rhs.size();
  GmresResult res;
  res.x.assign(n, 0.0);
  const double beta = norm2(rhs);
  const double target = std::max(opts.tol_rel * beta, opts.tol_abs);
  res.residual_norm = beta;
  res.residual_history.push_back(beta);
  if (beta <= target) {
    res.converged = true;
    return res;
  }

  const std::size_t m = std::min(opts.max_iter, n);
  std::vector<std::vector<double>> v;
  v.reserve(m + 1);
  v.emplace_back(rhs.begin(), rhs.end());
  for (double& e : v[0]) e /= beta;
  // Hessenberg columns, already rotated into upper triangular form.
  std::vector<std::vector<double>> h(m, std::vector<double>(m + 1, 0.0));
  std::vector<double> cs(m, 0.0);
  std::vector<double> sn(m, 0.0);
  std::vector<double> g(m + 1, 0.0);
  g[0] = beta;

  std::size_t k = 0;
  bool breakdown = false;
  std::vector<double> w(n);
  while (k < m) {
    op(v[k], w);
    const double w_norm0 = norm2(w);
    for (std::size_t i = 0; i <= k; ++i) {
      const double hik = dot(v[i], w);
      h[k][i] = hik;
      for (std::size_t q = 0; q < n; ++q) w[q] -= hik * v[i][q];
    }
    double w_norm = norm2(w);
    if (w_norm > 0.0) {
      double lost = 0.0;
      for (std::size_t i = 0; i <= k; ++i) lost = std::max(lost, std::abs(dot(v[i], w)) / w_norm);
      if (lost > 1e-8) {
        for (std::size_t i = 0; i <= k; ++i) {
          const double c = dot(v[i], w);
          h[k][i] += c;
          for (std::size_t q = 0; q < n; ++q) w[q] -= c * v[i][q];
        }
        w_norm = norm2(w);
      }
    }
    h[k][k + 1] = w_norm;
    breakdown = w_norm <= 1e-14 * std::max(w_norm0, 1.0);

    for (std::size_t i = 0; i < k; ++i) {
      const double a = h[k][i];
      const double b = h[k][i + 1];
      h[k][i] = cs[i] * a + sn[i] * b;
      h[k][i + 1] = -sn[i] * a + cs[i] * b;
    }
    const double a = h[k][k];
    const double b = h[k][k + 1];
    const double r = std::hypot(a, b);
    cs[k] = r > 0.0 ? a / r : 1.0;
    sn[k] = r > 0.0 ? b / r : 0.0;
    h[k][k] = r;
    h[k][k + 1] = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    ++k;
    res.residual_norm = std::abs(g[k]);
    res.residual_history.push_back(res.residual_norm);
    if (res.residual_norm <= target || breakdown) break;
    v.emplace_back(w);
    for (double& e : v.back()) e /= w_norm;
  }

  std::vector<double> y(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double s = g[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= h[j][i] * y[j];
    y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t q = 0; q < n; ++q) res.x[q] += y[i] * v[i][q];
  }
  res.iterations = k;
  res.converged = res.residual_norm <= target;
  return res;
}

GmresResult gmres_solve(const LinearOperator& op, std::span<const double> rhs,
                        const GmresOptions& opts) {
  if (rhs.size() != op.size()) throw std::invalid_argument("GMRES right-hand side size mismatch");
  return gmres_solve([&op](std::span<const double> v, std::span<double> out) { op.apply(v, out); },
                     rhs, opts);
}

IterationStats newton_solve(ForceModel& model, std::span<const double> x_prev, double dt,
                            std::span<double> x, std::vector<double>& f, BlockJacobian& a,
                            const NewtonOptions& opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("Newton step needs dt > 0");
  const std::size_t n = x.size();
  IterationStats stats;
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < opts.max_iter; ++j) {
    for (std::size_t k = 0; k < n; ++k) rhs[k] = -(x[k] - x_prev[k] - dt * f[k]);
    const LinearOperator op(a, dt);
    const GmresResult lin = gmres_solve(op, rhs, opts.gmres);
    stats.gmres_iters.push_back(lin.iterations);
    ++stats.newton_iters;
    for (std::size_t k = 0; k < n; ++k) x[k] += lin.x[k];
    if (norm2(lin.x) < opts.tol * (norm2(x) + 1.0)) {
      stats.converged = true;
      break;
    }
    model.force(x, f);
    a = model.jacobian(x);
    ++stats.force_evals;
    ++stats.jacobian_evals;
  }
  if (!stats.converged) {
    // f is current, so the nonlinear residual comes for free.
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = x[k] - x_prev[k] - dt * f[k];
      s += r * r;
    }
    stats.final_residual_norm = std::sqrt(s);
  }
  return stats;
}

std::vector<double> newton_solve(ForceModel& model, std::span<const double> x_prev, double dt,
                                 const NewtonOptions& opts, IterationStats* stats) {
  std::vector<double> x(x_prev.begin(), x_prev.end());
  std::vector<double> f(x.size());
  model.force(x, f);
  BlockJacobian a = model.jacobian(x);
  const IterationStats s = newton_solve(model, x_prev, dt, x, f, a, opts);
  if (stats) *stats = s;
  return x;
}

double implicit_residual(ForceModel& model, std::span<const double> x_prev, double dt,
                         std::span<const double> x) {
  std::vector<double> f(x.size());
  model.force(x, f);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = x[k] - x_prev[k] - dt * f[k];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace cbm
