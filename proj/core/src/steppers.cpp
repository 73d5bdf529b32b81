#include "cbm/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbm/neighbor_list.hpp"

namespace cbm {

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::Accuracy: return "accuracy";
    case Constraint::Stability: return "stability";
    case Constraint::EventTruncation: return "event";
    case Constraint::FixedStep: return "fixed";
    case Constraint::Displacement: return "displacement";
  }
  return "unknown";
}

NewtonOptions SolverConfig::newton_options() const {
  NewtonOptions o;
  o.max_iter = n_newton;
  o.tol = eps_newton();
  o.gmres = {eps_gmres(), eps_gmres(), n_gmres};
  return o;
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || !(fd_eps > 0.0) || !(newton_factor > 0.0) || !(gmres_factor > 0.0) ||
      !(dt_max_cap > 0.0) || !(dt_fixed > 0.0)) {
    throw std::invalid_argument("solver tolerances and step sizes must be positive");
  }
  if (m < 1) throw std::invalid_argument("multirate ratio m must be at least 1");
  if (n_newton < 1 || n_gmres < 1) throw std::invalid_argument("iteration limits must be >= 1");
}

double inf_norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s = std::max(s, std::abs(e));
  return s;
}

double accuracy_bound(double epsilon, double af_norm) {
  return af_norm > 0.0 ? std::sqrt(2.0 * epsilon / af_norm) : kInf;
}

double displacement_bound_dt(std::span<const double> f, double eps, double cap) {
  const double fn = inf_norm(f);
  return fn > 0.0 ? std::min(eps / fn, cap) : cap;
}

StepDecision decide_step(double dt_accuracy, double dt_stability, double dt_limit,
                         const SolverConfig& cfg) {
  StepDecision d;
  d.dt_accuracy = dt_accuracy;
  d.dt_stability = dt_stability;
  if (dt_stability < dt_accuracy) {
    d.dt = dt_stability;
    d.constraint = Constraint::Stability;
  } else {
    d.dt = dt_accuracy;
    d.constraint = Constraint::Accuracy;
  }
  if (!std::isfinite(d.dt)) d.dt = cfg.dt_max_cap;
  if (dt_limit < d.dt) {
    d.dt = dt_limit;
    d.constraint = Constraint::EventTruncation;
  }
  return d;
}

namespace {

void euler_update(std::span<double> x, std::span<const double> f, double dt) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += dt * f[k];
}

}  // namespace

StepOutcome srfe_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                      double dt_limit) {
  std::vector<double> f(x.size());
  model.force(x, f);
  const std::vector<double> af = fd_jacobian_force_product(
      [&model](std::span<const double> y, std::span<double> out) { model.force(y, out); }, x, f,
      cfg.fd_eps);
  StepOutcome out;
  out.f_evals = 2.0;
  out.af_norm = inf_norm(af);
  out.decision = decide_step(accuracy_bound(cfg.epsilon, out.af_norm), kInf, dt_limit, cfg);
  out.local_error = 0.5 * out.decision.dt * out.decision.dt * out.af_norm;
  euler_update(x, f, out.decision.dt);
  return out;
}

StepOutcome srfes_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                       double dt_limit) {
  std::vector<double> f(x.size());
  model.force(x, f);
  const BlockJacobian a = model.jacobian(x);
  const std::vector<double> af = a.apply(f);
  const EigenEstimate est = a.gershgorin();
  StepOutcome out;
  out.f_evals = 1.0;
  out.a_evals = 1;
  out.af_norm = inf_norm(af);
  out.lambda_min_est = est.lambda_min_est;
  out.decision = decide_step(accuracy_bound(cfg.epsilon, out.af_norm), stability_bound(est),
                             dt_limit, cfg);
  out.local_error = 0.5 * out.decision.dt * out.decision.dt * out.af_norm;
  euler_update(x, f, out.decision.dt);
  return out;
}

StepOutcome mrfe_macro_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                            double dt_limit) {
  const int d = model.dim();
  const std::size_t n_eq = x.size();
  const std::size_t n_cells = n_eq / d;
  const int m = cfg.m;

  std::vector<double> f(n_eq);
  model.force(x, f);
  const BlockJacobian a = model.jacobian(x);
  const std::vector<double> eta = a.apply(f);
  const EigenEstimate est = a.gershgorin();

  StepOutcome out;
  out.f_evals = 1.0;
  out.a_evals = 1;
  out.af_norm = inf_norm(eta);
  out.lambda_min_est = est.lambda_min_est;
  out.decision = decide_step(accuracy_bound(cfg.epsilon * m, out.af_norm), stability_bound(est),
                             dt_limit, cfg);

  MultirateLevels lv;
  lv.m = m;
  lv.tau1 = out.decision.dt;
  lv.tau0 = lv.tau1 / m;
  lv.chi1 = 2.0 * cfg.epsilon / (lv.tau1 * lv.tau1);

  // Classify equations, then promote every cell owning a fast equation.
  std::vector<std::uint32_t> fast_cells;
  std::vector<std::uint32_t> slow_cells;
  if (m > 1) {
    for (std::size_t c = 0; c < n_cells; ++c) {
      bool fast = false;
      for (int l = 0; l < d; ++l) fast = fast || std::abs(eta[c * d + l]) > lv.chi1;
      (fast ? fast_cells : slow_cells).push_back(static_cast<std::uint32_t>(c));
    }
  }
  double max_eta_fast = 0.0;
  double max_eta_slow = 0.0;
  for (std::uint32_t c : fast_cells) {
    for (int l = 0; l < d; ++l) {
      lv.k_fast.push_back(c * d + l);
      max_eta_fast = std::max(max_eta_fast, std::abs(eta[c * d + l]));
    }
  }

  if (fast_cells.empty() || slow_cells.empty()) {
    // Single level: everything with tau1 when nothing is fast, everything
    // with tau0 when nothing is slow.
    if (!fast_cells.empty()) {
      out.decision.dt = lv.tau0;
      lv.tau1 = lv.tau0;
      lv.k_fast.clear();
      lv.chi1 = 2.0 * cfg.epsilon / (lv.tau1 * lv.tau1);
    }
    lv.k_slow.resize(n_eq);
    for (std::size_t k = 0; k < n_eq; ++k) lv.k_slow[k] = static_cast<std::uint32_t>(k);
    out.local_error = 0.5 * out.decision.dt * out.decision.dt * out.af_norm;
    euler_update(x, f, out.decision.dt);
    out.levels = std::move(lv);
    return out;
  }

  for (std::uint32_t c : slow_cells) {
    for (int l = 0; l < d; ++l) {
      lv.k_slow.push_back(c * d + l);
      max_eta_slow = std::max(max_eta_slow, std::abs(eta[c * d + l]));
    }
  }
  out.local_error = std::max(m * 0.5 * lv.tau0 * lv.tau0 * max_eta_fast,
                             0.5 * lv.tau1 * lv.tau1 * max_eta_slow);

  std::vector<double> old_fast(fast_cells.size() * d);
  for (std::size_t q = 0; q < fast_cells.size(); ++q) {
    for (int l = 0; l < d; ++l) old_fast[q * d + l] = x[fast_cells[q] * d + l];
  }

  // m substeps of the fast cells; slow cells stay frozen meanwhile.
  const double per_cell = static_cast<double>(d) / static_cast<double>(n_eq);
  for (int sub = 0; sub < m; ++sub) {
    for (std::uint32_t c : fast_cells) {
      for (int l = 0; l < d; ++l) x[c * d + l] += lv.tau0 * f[c * d + l];
    }
    if (sub + 1 < m) {
      model.force_rows(x, fast_cells, f);
      out.f_evals += per_cell * static_cast<double>(fast_cells.size());
    }
  }

  // Refresh slow forces touched by the fast movement.
  std::vector<double> slow_pos(slow_cells.size() * d);
  for (std::size_t q = 0; q < slow_cells.size(); ++q) {
    for (int l = 0; l < d; ++l) slow_pos[q * d + l] = x[slow_cells[q] * d + l];
  }
  const double radius = model.interaction_radius();
  const SpatialHash hash(slow_pos, d, radius);
  std::vector<std::uint32_t> affected;
  for (std::size_t q = 0; q < fast_cells.size(); ++q) {
    for (const auto& near :
         {hash.near(std::span<const double>(old_fast).subspan(q * d, d), radius),
          hash.near(x.subspan(fast_cells[q] * d, d), radius)}) {
      for (std::uint32_t s : near) affected.push_back(slow_cells[s]);
    }
  }
  std::sort(affected.begin(), affected.end());
  affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
  if (!affected.empty()) {
    model.force_rows(x, affected, f);
    out.f_evals += per_cell * static_cast<double>(affected.size());
  }

  for (std::uint32_t c : slow_cells) {
    for (int l = 0; l < d; ++l) x[c * d + l] += lv.tau1 * f[c * d + l];
  }
  out.levels = std::move(lv);
  return out;
}

StepOutcome srbe_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                      double dt_limit) {
  const std::size_t n = x.size();
  std::vector<double> f(n);
  model.force(x, f);
  BlockJacobian a = model.jacobian(x);
  const std::vector<double> af = a.apply(f);

  StepOutcome out;
  out.f_evals = 1.0;
  out.a_evals = 1;
  out.af_norm = inf_norm(af);
  out.lambda_min_est = a.gershgorin().lambda_min_est;
  out.decision = decide_step(accuracy_bound(cfg.epsilon, out.af_norm), kInf, dt_limit, cfg);
  out.local_error = 0.5 * out.decision.dt * out.decision.dt * out.af_norm;

  const std::vector<double> x_prev(x.begin(), x.end());
  if (cfg.newton_predictor) {
    euler_update(x, f, out.decision.dt);
    model.force(x, f);
    a = model.jacobian(x);
    out.f_evals += 1.0;
    out.a_evals += 1;
  }
  IterationStats stats = newton_solve(model, x_prev, out.decision.dt, x, f, a,
                                      cfg.newton_options());
  out.f_evals += static_cast<double>(stats.force_evals);
  out.a_evals += stats.jacobian_evals;
  for (std::size_t g : stats.gmres_iters) out.matvecs += g;
  out.newton = std::move(stats);
  return out;
}

StepOutcome fixed_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                       double dt_limit) {
  std::vector<double> f(x.size());
  model.force(x, f);
  StepOutcome out;
  out.f_evals = 1.0;
  out.decision.dt = cfg.dt_fixed;
  out.decision.constraint = Constraint::FixedStep;
  if (dt_limit < out.decision.dt) {
    out.decision.dt = dt_limit;
    out.decision.constraint = Constraint::EventTruncation;
  }
  euler_update(x, f, out.decision.dt);
  return out;
}

StepOutcome displacement_step(ForceModel& model, std::span<double> x, const SolverConfig& cfg,
                              double dt_limit) {
  std::vector<double> f(x.size());
  model.force(x, f);
  StepOutcome out;
  out.f_evals = 1.0;
  out.decision.dt = displacement_bound_dt(f, cfg.epsilon, cfg.dt_max_cap);
  out.decision.dt_accuracy = out.decision.dt;
  out.decision.constraint = Constraint::Displacement;
  if (dt_limit < out.decision.dt) {
    out.decision.dt = dt_limit;
    out.decision.constraint = Constraint::EventTruncation;
  }
  euler_update(x, f, out.decision.dt);
  return out;
}

void fixed_step(ForceModel& model, std::span<double> x, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("fixed step needs dt > 0");
  std::vector<double> f(x.size());
  model.force(x, f);
  euler_update(x, f, dt);
}

}  // namespace cbm
