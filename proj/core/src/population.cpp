#include "cbm/population.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cbm {
namespace {

void check_coordinates(const std::vector<double>& v, int dim, const char* what) {
  if (v.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument(std::string(what) + " length is not a multiple of dim");
  }
  if (!std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); })) {
    throw std::invalid_argument(std::string(what) + " contain non-finite coordinates");
  }
}

}  // namespace

CellPopulation::CellPopulation(int dim, std::vector<double> free_positions,
                               std::vector<double> stationary_positions)
    : dim_(dim), free_(std::move(free_positions)), stationary_(std::move(stationary_positions)) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  check_coordinates(free_, dim_, "free positions");
  check_coordinates(stationary_, dim_, "stationary positions");
  ids_.resize(size());
  for (auto& id : ids_) id = next_id_++;
}

CellId CellPopulation::add_cell(std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("cell position has wrong dimension");
  }
  for (double c : x) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite cell position");
  }
  free_.insert(free_.end(), x.begin(), x.end());
  ids_.push_back(next_id_);
  return next_id_++;
}

void CellPopulation::remove_cell(std::size_t i) {
  if (i >= size()) throw std::out_of_range("cell index out of range");
  const auto first = free_.begin() + static_cast<std::ptrdiff_t>(i * dim_);
  free_.erase(first, first + dim_);
  ids_.erase(ids_.begin() + static_cast<std::ptrdiff_t>(i));
}

std::vector<double> center_of_gravity(std::span<const double> x, int dim) {
  const std::size_t n = x.size() / static_cast<std::size_t>(dim);
  if (n == 0) throw std::invalid_argument("center of gravity of an empty population");
  std::vector<double> g(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int l = 0; l < dim; ++l) g[l] += x[i * dim + l];
  }
  for (double& c : g) c /= static_cast<double>(n);
  return g;
}

std::vector<double> center_of_gravity(const CellPopulation& pop) {
  return center_of_gravity(pop.positions(), pop.dim());
}

}  // namespace cbm
