#include "cbm/forces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbm {

PairGeometry pair_geometry(const double* xi, const double* xj, int dim) {
  PairGeometry g;
  double r2 = 0.0;
  for (int l = 0; l < dim; ++l) {
    g.r_vec[l] = xj[l] - xi[l];
    r2 += g.r_vec[l] * g.r_vec[l];
  }
  g.r = std::sqrt(r2);
  if (g.r > 0.0) {
    for (int l = 0; l < dim; ++l) g.r_hat[l] = g.r_vec[l] / g.r;
  }
  return g;
}

bool pair_force(const double* xi, const double* xj, int dim, const ForceLaw& law, double* f) {
  double r2 = 0.0;
  double rv[3] = {0.0, 0.0, 0.0};
  for (int l = 0; l < dim; ++l) {
    rv[l] = xj[l] - xi[l];
    r2 += rv[l] * rv[l];
  }
  const double ra = law.cutoff();
  if (r2 >= ra * ra) return false;
  const double r = std::sqrt(r2);
  if (r == 0.0) throw std::domain_error("coincident centers of interacting cells");
  const double scale = law.force(r) / r;
  for (int l = 0; l < dim; ++l) f[l] = rv[l] * scale;
  return true;
}

void total_force(std::span<const double> x, std::span<const double> stationary, int dim,
                 const ForceLaw& law, const NeighborList& nl, std::span<double> out) {
  const std::size_t n = x.size() / dim;
  if (out.size() != x.size()) throw std::invalid_argument("force output has wrong size");
  std::fill(out.begin(), out.end(), 0.0);
  double f[3];
  for (const CellPair& p : nl.pairs) {
    const double* xi = &x[static_cast<std::size_t>(p.i) * dim];
    const bool j_free = p.j < n;
    const double* xj = j_free ? &x[static_cast<std::size_t>(p.j) * dim]
                              : &stationary[(static_cast<std::size_t>(p.j) - n) * dim];
    if (!pair_force(xi, xj, dim, law, f)) continue;
    for (int l = 0; l < dim; ++l) out[p.i * dim + l] += f[l];
    if (j_free) {
      for (int l = 0; l < dim; ++l) out[p.j * dim + l] -= f[l];
    }
  }
}

std::vector<double> total_force(const CellPopulation& pop, const ForceLaw& law,
                                const NeighborList& nl) {
  std::vector<double> out(pop.positions().size());
  total_force(pop.positions(), pop.stationary_positions(), pop.dim(), law, nl, out);
  return out;
}

double total_potential(std::span<const double> x, std::span<const double> stationary, int dim,
                       const ForceLaw& law, const PotentialOptions& opts,
                       std::size_t* coincident_pairs) {
  const std::size_t n = x.size() / dim;
  const std::size_t n0 = stationary.size() / dim;
  if (coincident_pairs) *coincident_pairs = 0;
  if (n == 0) return 0.0;
  const NeighborList nl = build_neighbor_list(x, stationary, dim, law.cutoff());
  double v = 0.0;
  for (const CellPair& p : nl.pairs) {
    const double* xi = &x[static_cast<std::size_t>(p.i) * dim];
    const double* xj = p.j < n ? &x[static_cast<std::size_t>(p.j) * dim]
                               : &stationary[(static_cast<std::size_t>(p.j) - n) * dim];
    const PairGeometry geom = pair_geometry(xi, xj, dim);
    if (geom.r == 0.0 && coincident_pairs) ++*coincident_pairs;
    v += law.potential(geom.r);
  }
  if (opts.include_ga_offset) {
    const double total_pairs =
        0.5 * static_cast<double>(n) * static_cast<double>(n - 1) +
        static_cast<double>(n) * static_cast<double>(n0);
    v += (total_pairs - static_cast<double>(nl.pairs.size())) * law.potential_at_cutoff();
  }
  return v;
}

double total_potential(const CellPopulation& pop, const ForceLaw& law,
                       const PotentialOptions& opts, std::size_t* coincident_pairs) {
  return total_potential(pop.positions(), pop.stationary_positions(), pop.dim(), law, opts,
                         coincident_pairs);
}

}  // namespace cbm
