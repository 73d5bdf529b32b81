#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cbm/jacobian.hpp"
#include "cbm/model.hpp"

namespace cbm {

/// The operator J = I - dt A applied through block-sparse products.
class LinearOperator {
 public:
  LinearOperator(const BlockJacobian& a, double dt) : a_(&a), dt_(dt) {}

  std::size_t size() const { return a_->rows(); }
  void apply(std::span<const double> v, std::span<double> out) const;

 private:
  const BlockJacobian* a_;
  double dt_;
};

struct GmresResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  ///< ||r_k||_2 for k = 0..iterations
};

struct GmresOptions {
  double tol_rel = 1e-6;
  double tol_abs = 1e-6;
  std::size_t max_iter = 10;
};

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Unrestarted GMRES from a zero initial guess with modified Gram-Schmidt
/// (plus one reorthogonalization pass when needed). Stops once
/// ||b - J x||_2 <= max(tol_rel ||b||_2, tol_abs).
GmresResult gmres_solve(const ApplyFn& op, std::span<const double> rhs, const GmresOptions& opts);
GmresResult gmres_solve(const LinearOperator& op, std::span<const double> rhs,
                        const GmresOptions& opts);

struct IterationStats {
  std::size_t newton_iters = 0;
  std::vector<std::size_t> gmres_iters;  ///< one entry per Newton iteration
  std::size_t force_evals = 0;
  std::size_t jacobian_evals = 0;
  double final_residual_norm = 0.0;  ///< ||x - x_prev - dt F(x)||_2 when known
  bool converged = false;
};

struct NewtonOptions {
  std::size_t max_iter = 5;
  double tol = 5e-6;  ///< eps_newton
  GmresOptions gmres{5e-6, 5e-6, 10};
};

/// Solves x - x_prev - dt F(x) = 0 by Newton iterations with GMRES on
/// I - dt A. `x` holds the initial guess on entry and the last iterate on
/// exit. `f` and `a` are the force and Jacobian at the initial guess; they
/// are refreshed after every Newton update that does not meet the stopping
/// test, so on return they belong to the last iterate only when
/// stats.converged is false.
IterationStats newton_solve(ForceModel& model, std::span<const double> x_prev, double dt,
                            std::span<double> x, std::vector<double>& f, BlockJacobian& a,
                            const NewtonOptions& opts);

/// Convenience form starting from x_prev.
std::vector<double> newton_solve(ForceModel& model, std::span<const double> x_prev, double dt,
                                 const NewtonOptions& opts, IterationStats* stats = nullptr);

/// ||x - x_prev - dt F(x)||_2, one extra force evaluation.
double implicit_residual(ForceModel& model, std::span<const double> x_prev, double dt,
                         std::span<const double> x);

}  // namespace cbm
