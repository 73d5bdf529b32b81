#include "cbm/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbm {

Block pair_block(const PairGeometry& geom, int dim, const ForceLaw& law) {
  if (!(geom.r > 0.0)) {
    throw std::domain_error("pair block undefined for coincident centers");
  }
  const double dg = law.force_derivative(geom.r);
  const double g_over_r = law.force(geom.r) / geom.r;
  Block b{};
  for (int a = 0; a < dim; ++a) {
    for (int c = 0; c < dim; ++c) {
      const double nn = geom.r_hat[a] * geom.r_hat[c];
      b[a * 3 + c] = nn * dg + ((a == c ? 1.0 : 0.0) - nn) * g_over_r;
    }
  }
  return b;
}

void BlockJacobian::add_free_pair(std::uint32_t i, std::uint32_t j, const Block& b) {
  free_pairs_.push_back({i, j, b});
  for (int k = 0; k < 9; ++k) {
    diag_[i][k] -= b[k];
    diag_[j][k] -= b[k];
  }
}

void BlockJacobian::add_stationary_pair(std::uint32_t i, std::uint32_t j, const Block& b) {
  stationary_pairs_.push_back({i, j, b});
  for (int k = 0; k < 9; ++k) diag_[i][k] -= b[k];
}

void BlockJacobian::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != rows() || out.size() != rows()) {
    throw std::invalid_argument("Jacobian product dimension mismatch");
  }
  const int d = dim_;
  for (std::size_t i = 0; i < n_free_; ++i) {
    const Block& b = diag_[i];
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += b[a * 3 + c] * v[i * d + c];
      out[i * d + a] = s;
    }
  }
  for (const Entry& e : free_pairs_) {
    for (int a = 0; a < d; ++a) {
      double si = 0.0;
      double sj = 0.0;
      for (int c = 0; c < d; ++c) {
        si += e.block[a * 3 + c] * v[e.j * d + c];
        sj += e.block[a * 3 + c] * v[e.i * d + c];
      }
      out[e.i * d + a] += si;
      out[e.j * d + a] += sj;
    }
  }
}

std::vector<double> BlockJacobian::apply(std::span<const double> v) const {
  std::vector<double> out(rows());
  apply(v, out);
  return out;
}

EigenEstimate BlockJacobian::gershgorin() const {
  if (n_free_ == 0) return {};
  const int d = dim_;
  // Absolute off-diagonal row sums rho_k, row index k = d*i + l.
  std::vector<double> rho(rows(), 0.0);
  for (const Entry& e : free_pairs_) {
    for (int a = 0; a < d; ++a) {
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += std::abs(e.block[a * 3 + c]);
      rho[e.i * d + a] += s;
      rho[e.j * d + a] += s;
    }
  }
  EigenEstimate est{std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n_free_; ++i) {
    const Block& b = diag_[i];
    for (int a = 0; a < d; ++a) {
      double r = rho[i * d + a];
      for (int c = 0; c < d; ++c) {
        if (c != a) r += std::abs(b[a * 3 + c]);
      }
      const double xi = b[a * 3 + a];
      est.lambda_min_est = std::min(est.lambda_min_est, xi - r);
      est.lambda_max_est = std::max(est.lambda_max_est, xi + r);
    }
  }
  return est;
}

std::vector<double> BlockJacobian::to_dense() const {
  if (n_free_ > 64) throw std::length_error("dense Jacobian limited to 64 cells");
  const std::size_t n = rows();
  const int d = dim_;
  std::vector<double> m(n * n, 0.0);
  auto put = [&](std::size_t bi, std::size_t bj, const Block& b) {
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < d; ++c) m[(bi * d + a) * n + bj * d + c] += b[a * 3 + c];
    }
  };
  for (std::size_t i = 0; i < n_free_; ++i) put(i, i, diag_[i]);
  for (const Entry& e : free_pairs_) {
    put(e.i, e.j, e.block);
    put(e.j, e.i, e.block);
  }
  return m;
}

BlockJacobian assemble(std::span<const double> x, std::span<const double> stationary, int dim,
                       const ForceLaw& law, const NeighborList& nl) {
  const std::size_t n = x.size() / dim;
  BlockJacobian jac(dim, n);
  const double ra = law.cutoff();
  for (const CellPair& p : nl.pairs) {
    const bool j_free = p.j < n;
    const double* xi = &x[static_cast<std::size_t>(p.i) * dim];
    const double* xj = j_free ? &x[static_cast<std::size_t>(p.j) * dim]
                              : &stationary[(static_cast<std::size_t>(p.j) - n) * dim];
    const PairGeometry geom = pair_geometry(xi, xj, dim);
    if (geom.r >= ra) continue;
    const Block b = pair_block(geom, dim, law);
    if (j_free) {
      jac.add_free_pair(p.i, p.j, b);
    } else {
      jac.add_stationary_pair(p.i, static_cast<std::uint32_t>(p.j - n), b);
    }
  }
  return jac;
}

BlockJacobian assemble(const CellPopulation& pop, const ForceLaw& law, const NeighborList& nl) {
  return assemble(pop.positions(), pop.stationary_positions(), pop.dim(), law, nl);
}

double gershgorin_min(const BlockJacobian& jac) { return jac.gershgorin().lambda_min_est; }

std::vector<double> jacobian_force_product(const BlockJacobian& jac, std::span<const double> f) {
  return jac.apply(f);
}

std::vector<double> fd_jacobian_force_product(const ForceEvaluator& force,
                                              std::span<const double> x,
                                              std::span<const double> f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (f.size() != x.size()) throw std::invalid_argument("force vector size mismatch");
  std::vector<double> shifted(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) shifted[k] = x[k] + eps * f[k];
  std::vector<double> out(x.size());
  force(shifted, out);
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (out[k] - f[k]) / eps;
  return out;
}

double stability_bound(const EigenEstimate& est) {
  if (!(est.lambda_min_est < 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / std::abs(est.lambda_min_est);
}

}  // namespace cbm
