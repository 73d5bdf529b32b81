#include "cbm/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cbm/forces.hpp"

namespace cbm {

CellForceModel::CellForceModel(ForceLaw law, int dim, std::vector<double> stationary)
    : law_(law), dim_(dim), stationary_(std::move(stationary)) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (stationary_.size() % static_cast<std::size_t>(dim) != 0) {
    throw std::invalid_argument("stationary coordinates not a multiple of the dimension");
  }
  skin_ = law_.cutoff() - law_.rest_length();
}

void CellForceModel::ensure_neighbors(std::span<const double> x) {
  if (valid_ && x.size() == built_at_.size()) {
    const double limit2 = 0.25 * skin_ * skin_;
    bool moved = false;
    for (std::size_t i = 0; i < x.size() && !moved; i += dim_) {
      double d2 = 0.0;
      for (int l = 0; l < dim_; ++l) {
        const double d = x[i + l] - built_at_[i + l];
        d2 += d * d;
      }
      moved = d2 > limit2;
    }
    if (!moved) return;
  }
  nl_ = build_neighbor_list(x, stationary_, dim_, law_.cutoff() + skin_);
  built_at_.assign(x.begin(), x.end());
  const std::size_t n = x.size() / dim_;
  adj_offsets_.assign(n + 1, 0);
  for (const CellPair& p : nl_.pairs) {
    ++adj_offsets_[p.i + 1];
    if (p.j < n) ++adj_offsets_[p.j + 1];
  }
  for (std::size_t i = 0; i < n; ++i) adj_offsets_[i + 1] += adj_offsets_[i];
  adj_pairs_.assign(adj_offsets_[n], 0);
  std::vector<std::size_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (std::size_t k = 0; k < nl_.pairs.size(); ++k) {
    const CellPair& p = nl_.pairs[k];
    adj_pairs_[fill[p.i]++] = k;
    if (p.j < n) adj_pairs_[fill[p.j]++] = k;
  }
  valid_ = true;
  ++rebuilds_;
}

const NeighborList& CellForceModel::neighbors(std::span<const double> x) {
  ensure_neighbors(x);
  return nl_;
}

void CellForceModel::force(std::span<const double> x, std::span<double> out) {
  ensure_neighbors(x);
  total_force(x, stationary_, dim_, law_, nl_, out);
}

void CellForceModel::force_rows(std::span<const double> x, std::span<const std::uint32_t> cells,
                                std::span<double> out) {
  ensure_neighbors(x);
  if (out.size() != x.size()) throw std::invalid_argument("force output has wrong size");
  const std::size_t n = x.size() / dim_;
  double f[3];
  for (std::uint32_t c : cells) {
    double acc[3] = {0.0, 0.0, 0.0};
    // Same pairs in the same ascending order as total_force, so every row
    // is accumulated with identical floating point operations.
    for (std::size_t a = adj_offsets_[c]; a < adj_offsets_[c + 1]; ++a) {
      const CellPair& p = nl_.pairs[adj_pairs_[a]];
      const double* xi = &x[static_cast<std::size_t>(p.i) * dim_];
      const double* xj = p.j < n ? &x[static_cast<std::size_t>(p.j) * dim_]
                                 : &stationary_[(static_cast<std::size_t>(p.j) - n) * dim_];
      if (!pair_force(xi, xj, dim_, law_, f)) continue;
      if (p.i == c) {
        for (int l = 0; l < dim_; ++l) acc[l] += f[l];
      } else {
        for (int l = 0; l < dim_; ++l) acc[l] -= f[l];
      }
    }
    for (int l = 0; l < dim_; ++l) out[static_cast<std::size_t>(c) * dim_ + l] = acc[l];
  }
}

BlockJacobian CellForceModel::jacobian(std::span<const double> x) {
  ensure_neighbors(x);
  return assemble(x, stationary_, dim_, law_, nl_);
}

}  // namespace cbm
