#include "cbm/harness/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbm/harness/spline.hpp"

namespace cbm {

std::vector<std::vector<double>> interpolate_trajectory(std::span<const Snapshot> traj,
                                                        std::span<const double> query_times) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  const std::size_t n = traj.front().x.size();
  // Drop repeated times (a state stored twice); keep the later copy.
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj[k].x.size() != n || traj[k].ids != traj.front().ids) {
      throw std::invalid_argument("snapshots of one window must hold the same cells");
    }
    if (!keep.empty() && traj[keep.back()].t == traj[k].t) {
      keep.back() = k;
    } else {
      keep.push_back(k);
    }
  }
  std::vector<double> t(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) t[k] = traj[keep[k]].t;

  std::vector<std::vector<double>> out(query_times.size(), std::vector<double>(n));
  std::vector<double> y(keep.size());
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t k = 0; k < keep.size(); ++k) y[k] = traj[keep[k]].x[c];
    const NaturalCubicSpline spline(t, y);
    for (std::size_t q = 0; q < query_times.size(); ++q) out[q][c] = spline(query_times[q]);
  }
  return out;
}

namespace {

struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

std::vector<Window> windows_of(const std::vector<Snapshot>& s) {
  std::vector<Window> w;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (w.empty() || s[k].ids != s[w.back().begin].ids) {
      w.push_back({k, k + 1});
    } else {
      w.back().end = k + 1;
    }
  }
  return w;
}

}  // namespace

ErrorReport global_error(const TrajectoryRecord& traj, const TrajectoryRecord& reference,
                         double t_from, double t_to) {
  const auto tw = windows_of(traj.snapshots);
  const auto rw = windows_of(reference.snapshots);
  ErrorReport rep;
  double sum_e = 0.0;
  double sum_r = 0.0;
  for (const Window& r : rw) {
    const auto& ids = reference.snapshots[r.begin].ids;
    const auto match = std::find_if(tw.begin(), tw.end(), [&](const Window& w) {
      return traj.snapshots[w.begin].ids == ids;
    });
    if (match == tw.end()) {
      throw std::invalid_argument("trajectory has no window with the reference cell set");
    }
    std::vector<double> q;
    std::vector<std::size_t> src;
    for (std::size_t k = r.begin; k < r.end; ++k) {
      const double t = reference.snapshots[k].t;
      if (t < t_from || t > t_to) continue;
      q.push_back(t);
      src.push_back(k);
    }
    if (q.empty()) continue;
    const auto x = interpolate_trajectory(
        std::span<const Snapshot>(traj.snapshots).subspan(match->begin, match->end - match->begin),
        q);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto& xr = reference.snapshots[src[k]].x;
      double e = 0.0;
      double nr = 0.0;
      for (std::size_t c = 0; c < xr.size(); ++c) {
        e = std::max(e, std::abs(x[k][c] - xr[c]));
        nr = std::max(nr, std::abs(xr[c]));
      }
      rep.times.push_back(q[k]);
      rep.abs_errors.push_back(e);
      sum_e += e * e;
      sum_r += nr * nr;
    }
  }
  rep.abs_error = std::sqrt(sum_e);
  rep.ref_norm = std::sqrt(sum_r);
  rep.rel_error = rep.ref_norm > 0.0 ? rep.abs_error / rep.ref_norm : rep.abs_error;
  return rep;
}

}  // namespace cbm
