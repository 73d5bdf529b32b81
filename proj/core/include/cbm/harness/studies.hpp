#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cbm/harness/error.hpp"
#include "cbm/integrate.hpp"
#include "cbm/scenarios.hpp"

namespace cbm {

/// Worker count for sweeps: CBM_THREADS if set and positive, else the
/// hardware concurrency (at least 1).
std::size_t sweep_threads();

/// Runs fn(0..count-1) on up to `threads` workers. Results are written by
/// index, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Fixed-step forward Euler run with every step stored.
TrajectoryRecord run_reference(const Scenario& sc, double dt_ref);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Start time of the first stability-bounded step, or the end time if the
/// accuracy bound always won.
double accuracy_interval_end(const TrajectoryRecord& rec);

struct ConvergenceRow {
  Method method = Method::Srfe;
  double epsilon = 0.0;
  double rel_error = 0.0;
  double abs_error = 0.0;
  std::size_t steps = 0;
  double t_acc = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;  ///< ordered by method, then epsilon
  std::vector<std::pair<Method, double>> slopes;
  double dt_ref = 0.0;
};

ConvergenceResult convergence_study(const Scenario& sc, const std::vector<Method>& methods,
                                    const std::vector<double>& eps_list, double dt_ref,
                                    const SolverConfig& base = {}, std::size_t threads = 1);

struct CostRow {
  Method method = Method::Fixed;
  double f_evals = 0.0;
  double a_evals = 0.0;
  std::size_t steps = 0;
  std::size_t matvecs = 0;
  double wall_s = 0.0;    ///< mean over repetitions
  double rel_wall = 0.0;  ///< relative to the fixed-step row, 0 if absent
};

/// Runs every method `reps` times (sequentially, for stable timings).
std::vector<CostRow> cost_benchmark(const Scenario& sc, const std::vector<Method>& methods,
                                    std::size_t reps, const SolverConfig& base = {});

struct SweepMRow {
  int m = 1;
  double tau1 = 0.0;
  double tau0 = 0.0;
  std::size_t n_fast = 0;
  double dt_stability = 0.0;
  Constraint constraint = Constraint::Accuracy;
};

/// First multirate macro step after the scenario's initial events.
std::vector<SweepMRow> sweep_m(const Scenario& sc, const std::vector<int>& m_list,
                               const SolverConfig& base = {});
/// Smallest m whose first macro step is bounded by stability; 0 if none.
int optimal_m(const std::vector<SweepMRow>& rows);

struct SweepNRow {
  int n_per_dim = 0;
  std::size_t n_cells = 0;
  Method method = Method::Srfe;
  double dt0 = 0.0;        ///< initial step (slow level for multirate), mean over seeds
  double n_fast0 = 0.0;    ///< initial fast equations, mean over seeds
  double dt_final = 0.0;   ///< last full step before T, mean over seeds; 0 if not run
};

std::vector<SweepNRow> sweep_n(const std::vector<int>& n_list, const std::vector<std::uint64_t>& seeds,
                               const std::vector<Method>& methods, const SolverConfig& base = {},
                               bool run_to_end = false, std::size_t threads = 1);

}  // namespace cbm
