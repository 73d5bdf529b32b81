#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cbm {

using CellId = std::uint64_t;

/// Positions of free and stationary cell centers in d dimensions.
///
/// Coordinates are stored flat: component l of free cell i sits at index
/// d*i + l, the same ordering as the state vector of the ODE system.
/// Stationary cells contribute forces but never move.
class CellPopulation {
 public:
  CellPopulation() = default;
  /// Throws std::invalid_argument on a bad dimension, ragged arrays or
  /// non-finite coordinates.
  CellPopulation(int dim, std::vector<double> free_positions,
                 std::vector<double> stationary_positions = {});

  int dim() const { return dim_; }
  std::size_t size() const { return free_.size() / static_cast<std::size_t>(dim_); }
  std::size_t stationary_size() const {
    return stationary_.size() / static_cast<std::size_t>(dim_);
  }

  std::span<double> positions() { return free_; }
  std::span<const double> positions() const { return free_; }
  std::span<const double> stationary_positions() const { return stationary_; }

  std::span<double> position(std::size_t i) {
    return std::span<double>(free_).subspan(i * dim_, dim_);
  }
  std::span<const double> position(std::size_t i) const {
    return std::span<const double>(free_).subspan(i * dim_, dim_);
  }

  const std::vector<CellId>& ids() const { return ids_; }
  CellId next_cell_id() const { return next_id_; }

  /// Appends a free cell and returns its fresh id.
  CellId add_cell(std::span<const double> x);
  /// Removes free cell i; ids of the remaining cells are kept.
  void remove_cell(std::size_t i);

 private:
  int dim_ = 3;
  std::vector<double> free_;
  std::vector<double> stationary_;
  std::vector<CellId> ids_;
  CellId next_id_ = 0;
};

/// Arithmetic mean of the free cell positions. Throws when there are none.
std::vector<double> center_of_gravity(const CellPopulation& pop);
std::vector<double> center_of_gravity(std::span<const double> x, int dim);

}  // namespace cbm
