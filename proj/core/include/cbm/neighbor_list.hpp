#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cbm/population.hpp"

namespace cbm {

/// Index pair (i < j) over the combined free + stationary index range:
/// free cells are 0..N-1, stationary cells N..N+N0-1.
struct CellPair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  friend auto operator<=>(const CellPair&, const CellPair&) = default;
};

/// Sorted candidate interaction pairs. Every pair closer than `cutoff` at
/// build time is present; stationary-stationary pairs are never listed.
struct NeighborList {
  std::vector<CellPair> pairs;
  std::uint64_t stamp = 0;
  double cutoff = 0.0;
  std::size_t n_free = 0;
};

/// Populations at or above this size are binned; smaller ones use all pairs.
inline constexpr std::size_t kBinningThreshold = 64;

NeighborList build_neighbor_list(const CellPopulation& pop, double cutoff);
NeighborList build_neighbor_list(std::span<const double> free_positions,
                                 std::span<const double> stationary_positions, int dim,
                                 double cutoff);

namespace detail {
std::vector<CellPair> all_pairs_within(std::span<const double> free_positions,
                                       std::span<const double> stationary_positions,
                                       int dim, double cutoff);
std::vector<CellPair> binned_pairs_within(std::span<const double> free_positions,
                                          std::span<const double> stationary_positions,
                                          int dim, double cutoff);
}  // namespace detail

/// Uniform grid over a point set for fixed-radius queries.
class SpatialHash {
 public:
  SpatialHash(std::span<const double> points, int dim, double bin_size);

  /// Indices of points strictly closer than `radius` (<= bin size) to `p`,
  /// in ascending order.
  std::vector<std::uint32_t> near(std::span<const double> p, double radius) const;

 private:
  std::int64_t key_of(const std::int64_t* cell) const;
  void cell_of(std::span<const double> p, std::int64_t* cell) const;

  std::span<const double> points_;
  int dim_;
  double bin_;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> bins_;
};

}  // namespace cbm
