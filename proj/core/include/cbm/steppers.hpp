#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cbm/linsolve.hpp"
#include "cbm/model.hpp"

namespace cbm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Constraint { Accuracy, Stability, EventTruncation, FixedStep, Displacement };

std::string_view to_string(Constraint c);

struct SolverConfig {
  double epsilon = 0.005;   ///< absolute accuracy
  double fd_eps = 1e-4;     ///< finite-difference parameter for A F
  int m = 14;               ///< multirate ratio
  std::size_t n_newton = 5;
  double newton_factor = 1e-3;  ///< eps_newton = newton_factor * epsilon
  double gmres_factor = 1e-3;   ///< eps_gmres = eps_gmres_abs = gmres_factor * epsilon
  std::size_t n_gmres = 10;
  double dt_max_cap = 10.0;     ///< used when every bound is infinite
  double dt_fixed = 0.0078;     ///< fixed-step baseline
  bool newton_predictor = false;  ///< start Newton from the forward Euler step

  double eps_newton() const { return newton_factor * epsilon; }
  double eps_gmres() const { return gmres_factor * epsilon; }
  NewtonOptions newton_options() const;
  /// Throws std::invalid_argument for non-positive tolerances or m < 1.
  void validate() const;
};

struct StepDecision {
  double dt = 0.0;
  Constraint constraint = Constraint::Accuracy;
  double dt_accuracy = kInf;
  double dt_stability = kInf;  ///< stays infinite for methods without the bound
};

struct MultirateLevels {
  int m = 1;
  double tau0 = 0.0;
  double tau1 = 0.0;
  double chi1 = 0.0;
  std::vector<std::uint32_t> k_fast;  ///< equation indices, whole cells
  std::vector<std::uint32_t> k_slow;
};

struct StepOutcome {
  StepDecision decision;
  double f_evals = 0.0;  ///< fractional for partial multirate updates
  std::size_t a_evals = 0;
  std::size_t matvecs = 0;
  double af_norm = 0.0;  ///< ||A F||_inf as used for the step size
  /// Estimated local error; for the multirate step max(m ||e0||, ||e1||).
  double local_error = 0.0;
  double lambda_min_est = 0.0;
  std::optional<MultirateLevels> levels;
  std::optional<IterationStats> newton;
};

/// Picks min(dt_accuracy, dt_stability), falling back to the cap when both
/// are infinite, and truncates to dt_limit.
StepDecision decide_step(double dt_accuracy, double dt_stability, double dt_limit,
                         const SolverConfig& cfg);

/// sqrt(2 eps / af_norm), infinite when af_norm is zero.
double accuracy_bound(double epsilon, double af_norm);

/// Forward Euler with the accuracy bound from a finite-difference A F.
StepOutcome srfe_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                      double dt_limit = kInf);
/// Forward Euler with accuracy and Gershgorin stability bounds.
StepOutcome srfes_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                       double dt_limit = kInf);
/// Two-level multirate forward Euler macro step.
StepOutcome mrfe_macro_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                            double dt_limit = kInf);
/// Backward Euler solved by Newton-GMRES, step size from the accuracy bound.
StepOutcome srbe_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                      double dt_limit = kInf);
/// Forward Euler with cfg.dt_fixed.
StepOutcome fixed_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                       double dt_limit = kInf);
/// Forward Euler with dt = eps / ||F||_inf.
StepOutcome displacement_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                              double dt_limit = kInf);

/// One forward Euler update x += dt F(x).
void fixed_step(ForceModel& model, std::span<double> x, double dt);

/// eps / ||F||_inf, or `cap` for a vanishing field.
double displacement_bound_dt(std::span<const double> f, double eps, double cap = 10.0);

double inf_norm(std::span<const double> v);

}  // namespace cbm
