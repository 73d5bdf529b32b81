#include "cbm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cbm {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Srfe: return "srfe";
    case Method::Srfes: return "srfes";
    case Method::Mrfe: return "mrfe";
    case Method::Srbe: return "srbe";
    case Method::Fixed: return "fixed";
    case Method::Displacement: return "displacement";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

StepOutcome take_step(Method method, ForceModel& model, std::span<double> x,
                      const SolverConfig& cfg, double dt_limit) {
  switch (method) {
    case Method::Srfe: return srfe_step(model, x, cfg, dt_limit);
    case Method::Srfes: return srfes_step(model, x, cfg, dt_limit);
    case Method::Mrfe: return mrfe_macro_step(model, x, cfg, dt_limit);
    case Method::Srbe: return srbe_step(model, x, cfg, dt_limit);
    case Method::Fixed: return fixed_step(model, x, cfg, dt_limit);
    case Method::Displacement: return displacement_step(model, x, cfg, dt_limit);
  }
  return {};
}

namespace {

bool near_time(double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)); }

void snapshot(TrajectoryRecord& rec, double t, const CellPopulation& pop) {
  if (!rec.snapshots.empty() && rec.snapshots.back().t == t &&
      rec.snapshots.back().ids == pop.ids()) {
    rec.snapshots.back().x.assign(pop.positions().begin(), pop.positions().end());
    return;
  }
  rec.snapshots.push_back({t, pop.ids(), {pop.positions().begin(), pop.positions().end()}});
}

}  // namespace

TrajectoryRecord integrate(ForceModel& model, CellPopulation& pop, const SolverConfig& cfg,
                           Method method, double t0, double T,
                           std::span<const DivisionEvent> events, SeededRng& rng,
                           const IntegrateOptions& opts) {
  cfg.validate();
  if (T < t0) throw std::invalid_argument("end time before start time");
  if (!std::is_sorted(events.begin(), events.end(),
                      [](const DivisionEvent& a, const DivisionEvent& b) { return a.time < b.time; })) {
    throw std::invalid_argument("events must be sorted by time");
  }
  TrajectoryRecord rec;
  rec.dim = pop.dim();
  rec.t_end = t0;
  std::size_t next_event = 0;
  auto apply_due = [&](double t) {
    bool any = false;
    while (next_event < events.size() &&
           (events[next_event].time <= t || near_time(events[next_event].time, t))) {
      DivisionRecord r = apply_division(pop, events[next_event], rng);
      r.time = t;
      rec.event_log.push_back(std::move(r));
      ++next_event;
      any = true;
    }
    if (any) model.invalidate();
    return any;
  };
  if (T == t0) return rec;

  apply_due(t0);
  snapshot(rec, t0, pop);

  double t = t0;
  std::vector<double> before;
  while (t < T && !near_time(t, T)) {
    if (rec.steps.size() >= opts.max_steps) {
      throw IntegrationError("step limit exceeded at t = " + std::to_string(t));
    }
    const double target =
        next_event < events.size() ? std::min(events[next_event].time, T) : T;
    std::span<double> x = pop.positions();
    if (opts.observer) before.assign(x.begin(), x.end());
    const StepOutcome out = take_step(method, model, x, cfg, target - t);
    const double dt = out.decision.dt;
    if (!(dt >= 1e-12)) {
      throw IntegrationError("step size underflow (dt = " + std::to_string(dt) +
                             ") at t = " + std::to_string(t));
    }
    double t_new = t + dt;
    if (out.decision.constraint == Constraint::EventTruncation || near_time(t_new, target)) {
      t_new = target;
    }

    rec.f_evals += out.f_evals;
    rec.a_evals += static_cast<double>(out.a_evals);
    rec.matvecs += out.matvecs;
    StepRecord s;
    s.t = t;
    s.dt = dt;
    s.constraint = out.decision.constraint;
    s.dt_accuracy = out.decision.dt_accuracy;
    s.dt_stability = out.decision.dt_stability;
    s.n_fast = out.levels ? out.levels->k_fast.size() : 0;
    s.f_evals = rec.f_evals;
    s.a_evals = rec.a_evals;
    if (out.newton) {
      s.newton_iters = out.newton->newton_iters;
      for (std::size_t g : out.newton->gmres_iters) s.gmres_iters += g;
      s.newton_converged = out.newton->converged;
      if (!s.newton_converged) ++rec.newton_warnings;
    }
    rec.steps.push_back(s);
    if (opts.observer) opts.observer({t, before, pop.positions(), out});

    t = t_new;
    const bool due = next_event < events.size() &&
                     (events[next_event].time <= t || near_time(events[next_event].time, t));
    const bool last = t >= T || near_time(t, T);
    if (due || last ||
        (opts.snapshot_stride > 0 && rec.steps.size() % opts.snapshot_stride == 0)) {
      snapshot(rec, t, pop);
    }
    if (due) {
      apply_due(t);
      snapshot(rec, t, pop);
    }
  }
  rec.t_end = T;
  return rec;
}

TrajectoryRecord integrate(CellPopulation& pop, const ForceLaw& law, const SolverConfig& cfg,
                           Method method, double t0, double T,
                           std::span<const DivisionEvent> events, SeededRng& rng,
                           const IntegrateOptions& opts) {
  CellForceModel model(law, pop.dim(),
                       {pop.stationary_positions().begin(), pop.stationary_positions().end()});
  return integrate(model, pop, cfg, method, t0, T, events, rng, opts);
}

TrajectoryRecord run_scenario(const Scenario& sc, Method method, const SolverConfig& cfg,
                              const IntegrateOptions& opts, CellPopulation* final_state) {
  CellPopulation pop = sc.population;
  SeededRng rng(sc.seed);
  TrajectoryRecord rec = integrate(pop, sc.law, cfg, method, sc.t0, sc.T, sc.events, rng, opts);
  if (final_state) *final_state = std::move(pop);
  return rec;
}

}  // namespace cbm
