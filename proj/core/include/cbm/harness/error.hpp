#pragma once

#include <span>
#include <vector>

#include "cbm/integrate.hpp"

namespace cbm {

/// Positions of `traj` at the query times, interpolated coordinate-wise by
/// natural cubic splines over the snapshots. All snapshots must carry the
/// same cells; throws std::out_of_range for queries outside the covered
/// time span.
std::vector<std::vector<double>> interpolate_trajectory(std::span<const Snapshot> traj,
                                                        std::span<const double> query_times);

struct ErrorReport {
  std::vector<double> times;
  std::vector<double> abs_errors;  ///< ||x(t) - x_ref(t)||_inf per reference time
  double abs_error = 0.0;          ///< discrete l2 norm of abs_errors
  double ref_norm = 0.0;           ///< same norm of ||x_ref(t)||_inf
  double rel_error = 0.0;
};

/// Error of `traj` against `reference` on the reference snapshot times in
/// [t_from, t_to]. Snapshots are split into windows of constant cell set
/// (at division events); each reference time is compared within the window
/// holding the same cells. Throws std::invalid_argument when no window of
/// `traj` matches.
ErrorReport global_error(const TrajectoryRecord& traj, const TrajectoryRecord& reference,
                         double t_from = -kInf, double t_to = kInf);

}  // namespace cbm
