#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cbm/force_law.hpp"
#include "cbm/jacobian.hpp"
#include "cbm/neighbor_list.hpp"

namespace cbm {

/// Right-hand side F(x) of the cell-center ODE system together with its
/// Jacobian. The steppers only talk to this interface, which keeps them
/// independent of how neighbors are found and lets tests count calls.
class ForceModel {
 public:
  virtual ~ForceModel() = default;

  virtual int dim() const = 0;

  /// Full force vector at x (length d*N).
  virtual void force(std::span<const double> x, std::span<double> out) = 0;

  /// Recompute only the rows of the given cells (ascending, unique). The
  /// values are bitwise identical to the corresponding rows of force().
  /// Other rows of `out` are left untouched.
  virtual void force_rows(std::span<const double> x, std::span<const std::uint32_t> cells,
                          std::span<double> out) = 0;

  virtual BlockJacobian jacobian(std::span<const double> x) = 0;

  virtual double interaction_radius() const = 0;

  /// Drop cached neighbor data, e.g. after the number of cells changed.
  virtual void invalidate() {}
};

/// Pairwise cell model with a Verlet-style neighbor cache: the pair list is
/// built with a skin of r_A - s and rebuilt once a cell has moved more than
/// half the skin, or when the number of cells changes.
class CellForceModel final : public ForceModel {
 public:
  CellForceModel(ForceLaw law, int dim, std::vector<double> stationary = {});

  int dim() const override { return dim_; }
  const ForceLaw& law() const { return law_; }
  std::span<const double> stationary() const { return stationary_; }

  void force(std::span<const double> x, std::span<double> out) override;
  void force_rows(std::span<const double> x, std::span<const std::uint32_t> cells,
                  std::span<double> out) override;
  BlockJacobian jacobian(std::span<const double> x) override;
  double interaction_radius() const override { return law_.cutoff(); }
  void invalidate() override { valid_ = false; }

  std::size_t rebuild_count() const { return rebuilds_; }
  const NeighborList& neighbors(std::span<const double> x);

 private:
  void ensure_neighbors(std::span<const double> x);

  ForceLaw law_;
  int dim_;
  std::vector<double> stationary_;
  double skin_;
  NeighborList nl_;
  std::vector<double> built_at_;
  // For every free cell, indices into nl_.pairs of the pairs it belongs to.
  std::vector<std::size_t> adj_offsets_;
  std::vector<std::size_t> adj_pairs_;
  bool valid_ = false;
  std::size_t rebuilds_ = 0;
};

}  // namespace cbm
