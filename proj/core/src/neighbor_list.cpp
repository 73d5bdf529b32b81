#include "cbm/neighbor_list.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace cbm {
namespace {

std::atomic<std::uint64_t> g_stamp{0};

double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int l = 0; l < dim; ++l) {
    const double d = b[l] - a[l];
    s += d * d;
  }
  return s;
}

// Combined coordinate array: free cells first, stationary cells after.
std::vector<double> combined(std::span<const double> free_positions,
                             std::span<const double> stationary_positions) {
  std::vector<double> all(free_positions.begin(), free_positions.end());
  all.insert(all.end(), stationary_positions.begin(), stationary_positions.end());
  return all;
}

}  // namespace

namespace detail {

std::vector<CellPair> all_pairs_within(std::span<const double> free_positions,
                                       std::span<const double> stationary_positions,
                                       int dim, double cutoff) {
  const std::size_t n = free_positions.size() / dim;
  const auto all = combined(free_positions, stationary_positions);
  const std::size_t total = all.size() / dim;
  const double c2 = cutoff * cutoff;
  std::vector<CellPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      if (squared_distance(&all[i * dim], &all[j * dim], dim) < c2) {
        pairs.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  }
  return pairs;
}

std::vector<CellPair> binned_pairs_within(std::span<const double> free_positions,
                                          std::span<const double> stationary_positions,
                                          int dim, double cutoff) {
  const std::size_t n = free_positions.size() / dim;
  const auto all = combined(free_positions, stationary_positions);
  const SpatialHash hash(all, dim, cutoff);
  std::vector<CellPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const auto near = hash.near(std::span<const double>(all).subspan(i * dim, dim), cutoff);
    for (std::uint32_t j : near) {
      if (j > i) pairs.push_back({static_cast<std::uint32_t>(i), j});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace detail

NeighborList build_neighbor_list(std::span<const double> free_positions,
                                 std::span<const double> stationary_positions, int dim,
                                 double cutoff) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("neighbor cutoff must be positive");
  NeighborList nl;
  nl.cutoff = cutoff;
  nl.n_free = free_positions.size() / dim;
  const std::size_t total = nl.n_free + stationary_positions.size() / dim;
  nl.pairs = total >= kBinningThreshold
                 ? detail::binned_pairs_within(free_positions, stationary_positions, dim, cutoff)
                 : detail::all_pairs_within(free_positions, stationary_positions, dim, cutoff);
  nl.stamp = ++g_stamp;
  return nl;
}

NeighborList build_neighbor_list(const CellPopulation& pop, double cutoff) {
  return build_neighbor_list(pop.positions(), pop.stationary_positions(), pop.dim(), cutoff);
}

SpatialHash::SpatialHash(std::span<const double> points, int dim, double bin_size)
    : points_(points), dim_(dim), bin_(bin_size) {
  if (!(bin_size > 0.0)) throw std::invalid_argument("bin size must be positive");
  const std::size_t n = points.size() / dim;
  std::int64_t cell[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    cell_of(points.subspan(i * dim, dim), cell);
    bins_[key_of(cell)].push_back(static_cast<std::uint32_t>(i));
  }
}

void SpatialHash::cell_of(std::span<const double> p, std::int64_t* cell) const {
  for (int l = 0; l < dim_; ++l) cell[l] = static_cast<std::int64_t>(std::floor(p[l] / bin_));
  for (int l = dim_; l < 3; ++l) cell[l] = 0;
}

std::int64_t SpatialHash::key_of(const std::int64_t* cell) const {
  // 21 bits per axis, offset so negative cells map to distinct keys.
  constexpr std::int64_t kOffset = 1 << 20;
  constexpr std::int64_t kMask = (1 << 21) - 1;
  return ((cell[0] + kOffset) & kMask) | (((cell[1] + kOffset) & kMask) << 21) |
         (((cell[2] + kOffset) & kMask) << 42);
}

std::vector<std::uint32_t> SpatialHash::near(std::span<const double> p, double radius) const {
  std::int64_t center[3] = {0, 0, 0};
  cell_of(p, center);
  const double r2 = radius * radius;
  std::vector<std::uint32_t> out;
  const int reach_y = dim_ >= 2 ? 1 : 0;
  const int reach_z = dim_ >= 3 ? 1 : 0;
  std::int64_t cell[3];
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -reach_y; dy <= reach_y; ++dy) {
      for (int dz = -reach_z; dz <= reach_z; ++dz) {
        cell[0] = center[0] + dx;
        cell[1] = center[1] + dy;
        cell[2] = center[2] + dz;
        const auto it = bins_.find(key_of(cell));
        if (it == bins_.end()) continue;
        for (std::uint32_t j : it->second) {
          if (squared_distance(p.data(), &points_[static_cast<std::size_t>(j) * dim_], dim_) < r2) {
            out.push_back(j);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cbm
