#include "cbm/harness/studies.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace cbm {

std::size_t sweep_threads() {
  if (const char* env = std::getenv("CBM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

TrajectoryRecord run_reference(const Scenario& sc, double dt_ref) {
  if (!(dt_ref > 0.0)) throw std::invalid_argument("reference step must be positive");
  SolverConfig cfg;
  cfg.dt_fixed = dt_ref;
  return run_scenario(sc, Method::Fixed, cfg);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double accuracy_interval_end(const TrajectoryRecord& rec) {
  for (const StepRecord& s : rec.steps) {
    if (s.constraint == Constraint::Stability) return s.t;
  }
  return rec.t_end;
}

ConvergenceResult convergence_study(const Scenario& sc, const std::vector<Method>& methods,
                                    const std::vector<double>& eps_list, double dt_ref,
                                    const SolverConfig& base, std::size_t threads) {
  if (eps_list.size() < 3) throw std::invalid_argument("convergence study needs >= 3 epsilons");
  ConvergenceResult res;
  res.dt_ref = dt_ref;
  const TrajectoryRecord ref = run_reference(sc, dt_ref);
  res.rows.resize(methods.size() * eps_list.size());
  parallel_for(res.rows.size(), threads, [&](std::size_t i) {
    const Method m = methods[i / eps_list.size()];
    SolverConfig cfg = base;
    cfg.epsilon = eps_list[i % eps_list.size()];
    const TrajectoryRecord rec = run_scenario(sc, m, cfg);
    const ErrorReport err = global_error(rec, ref, sc.t0, sc.T);
    res.rows[i] = {m, cfg.epsilon, err.rel_error, err.abs_error, rec.steps.size(),
                   accuracy_interval_end(rec)};
  });
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<double> e, r;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      e.push_back(res.rows[mi * eps_list.size() + k].epsilon);
      r.push_back(res.rows[mi * eps_list.size() + k].rel_error);
    }
    res.slopes.emplace_back(methods[mi], log_log_slope(e, r));
  }
  return res;
}

std::vector<CostRow> cost_benchmark(const Scenario& sc, const std::vector<Method>& methods,
                                    std::size_t reps, const SolverConfig& base) {
  if (reps < 1) throw std::invalid_argument("need at least one repetition");
  IntegrateOptions opts;
  opts.snapshot_stride = 0;
  std::vector<CostRow> rows;
  for (Method m : methods) {
    CostRow row;
    row.method = m;
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      const TrajectoryRecord rec = run_scenario(sc, m, base, opts);
      total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.f_evals = rec.f_evals;
      row.a_evals = rec.a_evals;
      row.steps = rec.steps.size();
      row.matvecs = rec.matvecs;
    }
    row.wall_s = total / static_cast<double>(reps);
    rows.push_back(row);
  }
  const auto fixed = std::find_if(rows.begin(), rows.end(),
                                  [](const CostRow& r) { return r.method == Method::Fixed; });
  if (fixed != rows.end() && fixed->wall_s > 0.0) {
    const double w = fixed->wall_s;
    for (CostRow& r : rows) r.rel_wall = r.wall_s / w;
  }
  return rows;
}

std::vector<SweepMRow> sweep_m(const Scenario& sc, const std::vector<int>& m_list,
                               const SolverConfig& base) {
  const CellPopulation start = setup_population(sc);
  std::vector<SweepMRow> rows;
  for (int m : m_list) {
    SolverConfig cfg = base;
    cfg.m = m;
    cfg.validate();
    CellPopulation pop = start;
    CellForceModel model(sc.law, pop.dim(),
                         {pop.stationary_positions().begin(), pop.stationary_positions().end()});
    const StepOutcome out = mrfe_macro_step(model, pop.positions(), cfg, sc.T - sc.t0);
    SweepMRow row;
    row.m = m;
    row.tau1 = out.levels->tau1;
    row.tau0 = out.levels->tau0;
    row.n_fast = out.levels->k_fast.size();
    row.dt_stability = out.decision.dt_stability;
    row.constraint = out.decision.constraint;
    rows.push_back(row);
  }
  return rows;
}

int optimal_m(const std::vector<SweepMRow>& rows) {
  int best = 0;
  for (const SweepMRow& r : rows) {
    if (r.constraint == Constraint::Stability && (best == 0 || r.m < best)) best = r.m;
  }
  return best;
}

std::vector<SweepNRow> sweep_n(const std::vector<int>& n_list,
                               const std::vector<std::uint64_t>& seeds,
                               const std::vector<Method>& methods, const SolverConfig& base,
                               bool run_to_end, std::size_t threads) {
  if (seeds.empty()) throw std::invalid_argument("need at least one seed");
  const std::size_t per_n = methods.size() * seeds.size();
  struct Cell {
    double dt0 = 0.0;
    double n_fast0 = 0.0;
    double dt_final = 0.0;
    std::size_t n_cells = 0;
  };
  std::vector<Cell> cells(n_list.size() * per_n);
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    const int n = n_list[i / per_n];
    const Method method = methods[(i % per_n) / seeds.size()];
    const std::uint64_t seed = seeds[i % seeds.size()];
    const Scenario sc = division_in_spheroid(n, seed);
    Cell& c = cells[i];
    if (run_to_end) {
      const TrajectoryRecord rec = run_scenario(sc, method, base, {0, {}, 50'000'000});
      c.dt0 = rec.steps.front().dt;
      // The last step may be cut short by T; report the one before.
      c.dt_final = rec.steps.size() > 1 ? rec.steps[rec.steps.size() - 2].dt : c.dt0;
      c.n_fast0 = static_cast<double>(rec.steps.front().n_fast);
      c.n_cells = rec.snapshots.back().ids.size();
    } else {
      CellPopulation pop = setup_population(sc);
      CellForceModel model(sc.law, pop.dim());
      const StepOutcome out = take_step(method, model, pop.positions(), base, sc.T - sc.t0);
      c.dt0 = out.decision.dt;
      c.n_fast0 = out.levels ? static_cast<double>(out.levels->k_fast.size()) : 0.0;
      c.n_cells = pop.size();
    }
  });
  std::vector<SweepNRow> rows;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      SweepNRow row;
      row.n_per_dim = n_list[ni];
      row.method = methods[mi];
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        const Cell& c = cells[ni * per_n + mi * seeds.size() + si];
        row.dt0 += c.dt0;
        row.n_fast0 += c.n_fast0;
        row.dt_final += c.dt_final;
        row.n_cells = c.n_cells;
      }
      const double k = static_cast<double>(seeds.size());
      row.dt0 /= k;
      row.n_fast0 /= k;
      row.dt_final /= k;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace cbm
