#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbm/model.hpp"
#include "cbm/population.hpp"
#include "cbm/scenarios.hpp"
#include "cbm/steppers.hpp"

namespace cbm {

enum class Method { Srfe, Srfes, Mrfe, Srbe, Fixed, Displacement };

std::string_view to_string(Method m);
/// Accepts srfe, srfes, mrfe, srbe, fixed, displacement.
std::optional<Method> parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::Srfe,  Method::Srfes, Method::Mrfe,
                                         Method::Srbe,  Method::Fixed, Method::Displacement};

StepOutcome take_step(Method method, ForceModel& model, std::span<double> x,
                      const SolverConfig& cfg, double dt_limit);

struct StepRecord {
  double t = 0.0;  ///< start of the step
  double dt = 0.0;
  Constraint constraint = Constraint::Accuracy;
  double dt_accuracy = kInf;
  double dt_stability = kInf;
  std::size_t n_fast = 0;  ///< equations on the fast level
  double f_evals = 0.0;    ///< cumulative after this step
  double a_evals = 0.0;    ///< cumulative after this step
  std::size_t newton_iters = 0;
  std::size_t gmres_iters = 0;
  bool newton_converged = true;
};

struct Snapshot {
  double t = 0.0;
  std::vector<CellId> ids;
  std::vector<double> x;
};

struct TrajectoryRecord {
  int dim = 3;
  std::vector<StepRecord> steps;
  std::vector<Snapshot> snapshots;
  std::vector<DivisionRecord> event_log;
  double f_evals = 0.0;
  double a_evals = 0.0;
  std::size_t matvecs = 0;
  std::size_t newton_warnings = 0;
  double t_end = 0.0;
};

/// Called after every accepted step with the state before and after it.
struct StepView {
  double t = 0.0;
  std::span<const double> x_before;
  std::span<const double> x_after;
  const StepOutcome& outcome;
};
using StepObserver = std::function<void(const StepView&)>;

struct IntegrateOptions {
  /// Store positions every `snapshot_stride` steps; 0 keeps only the initial
  /// state, states right after events and the final state.
  std::size_t snapshot_stride = 1;
  StepObserver observer;
  std::size_t max_steps = 50'000'000;
};

/// Thrown when the chosen step falls below 1e-12 or max_steps is exceeded.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Advances `pop` from t0 to T. Step sizes are truncated so that steps land
/// exactly on event times and on T; events scheduled at or before t0 are
/// applied before the first step, events at T after the last one.
TrajectoryRecord integrate(ForceModel& model, CellPopulation& pop, const SolverConfig& cfg,
                           Method method, double t0, double T,
                           std::span<const DivisionEvent> events, SeededRng& rng,
                           const IntegrateOptions& opts = {});

TrajectoryRecord integrate(CellPopulation& pop, const ForceLaw& law, const SolverConfig& cfg,
                           Method method, double t0, double T,
                           std::span<const DivisionEvent> events, SeededRng& rng,
                           const IntegrateOptions& opts = {});

/// Runs a scenario from its initial population with its own seed.
TrajectoryRecord run_scenario(const Scenario& sc, Method method, const SolverConfig& cfg,
                              const IntegrateOptions& opts = {},
                              CellPopulation* final_state = nullptr);

}  // namespace cbm
