#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cbm/force_law.hpp"
#include "cbm/neighbor_list.hpp"
#include "cbm/population.hpp"

namespace cbm {

/// Relative position of cell j seen from cell i.
struct PairGeometry {
  std::array<double, 3> r_vec{};  ///< x_j - x_i
  double r = 0.0;                 ///< |r_vec|
  std::array<double, 3> r_hat{};  ///< r_vec / r, zero when r == 0
};

PairGeometry pair_geometry(const double* xi, const double* xj, int dim);

/// Total force on every free cell, F_i = sum_j r_hat_ij g(r_ij), summed in
/// ascending pair order. `nl` must be complete for `x`.
///
/// Throws std::domain_error if two interacting centers coincide.
void total_force(std::span<const double> x, std::span<const double> stationary, int dim,
                 const ForceLaw& law, const NeighborList& nl, std::span<double> out);
std::vector<double> total_force(const CellPopulation& pop, const ForceLaw& law,
                                const NeighborList& nl);

/// Force contribution r_hat_ij g(r_ij) of pair (i, j) on cell i, written to
/// `f[0..dim)`. Returns false when the pair is out of range.
bool pair_force(const double* xi, const double* xj, int dim, const ForceLaw& law, double* f);

struct PotentialOptions {
  /// Count G_A for every non-interacting pair. Off by default so that a
  /// population at rest has V = 0. Without it V jumps by G_A whenever a
  /// pair crosses r_A, so set it when comparing V along a trajectory.
  bool include_ga_offset = false;
};

/// Total potential V. Free-free pairs count once, free-stationary pairs
/// count once as well so that F = -grad V holds with stationary cells.
/// Coincident centers contribute G(0); their number is reported through
/// `coincident_pairs` when given.
double total_potential(std::span<const double> x, std::span<const double> stationary, int dim,
                       const ForceLaw& law, const PotentialOptions& opts = {},
                       std::size_t* coincident_pairs = nullptr);
double total_potential(const CellPopulation& pop, const ForceLaw& law,
                       const PotentialOptions& opts = {}, std::size_t* coincident_pairs = nullptr);

}  // namespace cbm
