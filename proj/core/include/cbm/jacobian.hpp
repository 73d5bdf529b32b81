#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cbm/force_law.hpp"
#include "cbm/forces.hpp"
#include "cbm/neighbor_list.hpp"

namespace cbm {

/// Row-major 3x3 block; only the leading dim x dim part is used.
using Block = std::array<double, 9>;

/// d x d interaction block r_hat r_hat^T g'(r) + (I - r_hat r_hat^T) g(r)/r.
/// Throws std::domain_error when r == 0.
Block pair_block(const PairGeometry& geom, int dim, const ForceLaw& law);

/// Gershgorin bounds on the spectrum of the free-free Jacobian.
struct EigenEstimate {
  double lambda_min_est = 0.0;
  double lambda_max_est = 0.0;
};

/// Block-sparse Jacobian of the force field with respect to the free
/// coordinates.
///
/// Off-diagonal blocks are stored once per in-range free pair; because the
/// blocks are symmetric and A^ij = A^ji, the assembled matrix is exactly
/// symmetric. Free-stationary interactions only enter the diagonal blocks.
class BlockJacobian {
 public:
  struct Entry {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    Block block{};
  };

  BlockJacobian() = default;
  BlockJacobian(int dim, std::size_t n_free) : dim_(dim), n_free_(n_free), diag_(n_free, Block{}) {}

  int dim() const { return dim_; }
  std::size_t n_free() const { return n_free_; }
  std::size_t rows() const { return n_free_ * static_cast<std::size_t>(dim_); }

  const std::vector<Entry>& free_pairs() const { return free_pairs_; }
  const std::vector<Entry>& stationary_pairs() const { return stationary_pairs_; }
  const std::vector<Block>& diagonal() const { return diag_; }

  void add_free_pair(std::uint32_t i, std::uint32_t j, const Block& b);
  void add_stationary_pair(std::uint32_t i, std::uint32_t j, const Block& b);

  /// out = A v. Throws std::invalid_argument on a size mismatch.
  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

  EigenEstimate gershgorin() const;

  /// Dense row-major copy, for test oracles only (N <= 64).
  std::vector<double> to_dense() const;

 private:
  int dim_ = 3;
  std::size_t n_free_ = 0;
  std::vector<Entry> free_pairs_;
  std::vector<Entry> stationary_pairs_;
  std::vector<Block> diag_;
};

BlockJacobian assemble(std::span<const double> x, std::span<const double> stationary, int dim,
                       const ForceLaw& law, const NeighborList& nl);
BlockJacobian assemble(const CellPopulation& pop, const ForceLaw& law, const NeighborList& nl);

/// min_k (xi_k - rho_k) over the rows of the free-free matrix; never above the
/// true smallest eigenvalue.
double gershgorin_min(const BlockJacobian& jac);

/// Exact product A F.
std::vector<double> jacobian_force_product(const BlockJacobian& jac, std::span<const double> f);

using ForceEvaluator = std::function<void(std::span<const double>, std::span<double>)>;

/// One-sided difference (F(x + eps F) - F) / eps.
std::vector<double> fd_jacobian_force_product(const ForceEvaluator& force,
                                              std::span<const double> x,
                                              std::span<const double> f, double eps = 1e-4);

/// Step size 2 / |lambda_min| permitted by the Gershgorin estimate; +inf when
/// the estimate is non-negative.
double stability_bound(const EigenEstimate& est);

}  // namespace cbm
