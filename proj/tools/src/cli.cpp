#include "cbm_tools/cli.hpp"

#include <filesystem>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cbm/harness/report.hpp"
#include "cbm/harness/studies.hpp"
#include "cbm/integrate.hpp"
#include "cbm/scenario_io.hpp"

namespace cbm {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kMethodNames = {"srfe", "srfes", "mrfe",
                                               "srbe", "fixed", "displacement"};

std::vector<Method> to_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(*parse_method(n));
  return out;
}

struct SolverFlags {
  double eps = 0.005;
  int m = 14;
  double dt_fixed = 0.0078;

  void add(CLI::App& app) {
    app.add_option("--eps", eps, "Absolute accuracy")->check(CLI::PositiveNumber);
    app.add_option("--m", m, "Multirate level ratio")->check(CLI::Range(1, 1000));
    app.add_option("--dt-fixed", dt_fixed, "Step of the fixed-step baseline")
        ->check(CLI::PositiveNumber);
  }
  SolverConfig config() const {
    SolverConfig c;
    c.epsilon = eps;
    c.m = m;
    c.dt_fixed = dt_fixed;
    c.validate();
    return c;
  }
  nlohmann::json json() const { return {{"eps", eps}, {"m", m}, {"dt_fixed", dt_fixed}}; }
};

nlohmann::json method_list(const std::vector<std::string>& names) { return names; }

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Center-based cell model simulator", "cbm"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Integrate one scenario and write traces");
  std::string sim_file;
  std::string sim_method = "srfe";
  std::string sim_out = "out";
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_T;
  std::size_t sim_stride = 1;
  SolverFlags sim_solver;
  sim->add_option("scenario", sim_file, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  sim->add_option("--method", sim_method, "Integrator")->check(CLI::IsMember(kMethodNames));
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_option("--seed", sim_seed, "Override the scenario seed");
  sim->add_option("--T", sim_T, "Override the end time")->check(CLI::PositiveNumber);
  sim->add_option("--stride", sim_stride, "Store positions every n steps (0: events and ends only)");
  sim_solver.add(*sim);

  // convergence
  auto* conv = app.add_subcommand("convergence", "Global error against a fine reference");
  std::string conv_file;
  std::vector<std::string> conv_methods = {"srfe", "srfes", "srbe"};
  std::vector<double> conv_eps = {0.01, 0.005, 0.0025, 0.00125};
  double conv_dt_ref = 5e-5;
  double conv_T = 3.0;
  std::string conv_out = "out";
  SolverFlags conv_solver;
  conv->add_option("--scenario", conv_file, "Scenario JSON (default: two cells)")
      ->check(CLI::ExistingFile);
  conv->add_option("--methods", conv_methods, "Integrators")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  conv->add_option("--eps-list", conv_eps, "Accuracy values")->delimiter(',');
  conv->add_option("--dt-ref", conv_dt_ref, "Reference step")->check(CLI::PositiveNumber);
  conv->add_option("--T", conv_T, "End time")->check(CLI::PositiveNumber);
  conv->add_option("--out", conv_out, "Output directory");
  conv_solver.add(*conv);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Evaluation counts and wall time per method");
  std::string bench_file;
  std::vector<std::string> bench_methods = {"fixed", "srfe", "srfes", "mrfe", "srbe"};
  std::size_t bench_reps = 1;
  std::string bench_out = "out";
  std::optional<std::uint64_t> bench_seed;
  SolverFlags bench_solver;
  bench->add_option("scenario", bench_file, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  bench->add_option("--methods", bench_methods, "Integrators")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  bench->add_option("--reps", bench_reps, "Repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--seed", bench_seed, "Override the scenario seed");
  bench_solver.add(*bench);

  // sweep-m
  auto* swm = app.add_subcommand("sweep-m", "First multirate step as a function of m");
  std::string swm_file;
  std::vector<int> swm_m;
  std::string swm_out = "out";
  std::optional<std::uint64_t> swm_seed;
  SolverFlags swm_solver;
  swm->add_option("--scenario", swm_file, "Scenario JSON (default: division in a 6^3 spheroid)")
      ->check(CLI::ExistingFile);
  swm->add_option("--m-list", swm_m, "Ratios to try (default 1..20)")
      ->delimiter(',')
      ->check(CLI::Range(1, 1000));
  swm->add_option("--out", swm_out, "Output directory");
  swm->add_option("--seed", swm_seed, "Override the scenario seed");
  swm_solver.add(*swm);

  // sweep-n
  auto* swn = app.add_subcommand("sweep-n", "Initial step size against spheroid size");
  std::vector<int> swn_n = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::uint64_t> swn_seeds = {1, 2, 3, 4, 5};
  std::vector<std::string> swn_methods = {"srfe", "srfes", "mrfe", "srbe"};
  bool swn_full = false;
  std::string swn_out = "out";
  SolverFlags swn_solver;
  swn->add_option("--n-list", swn_n, "Cells per dimension")->delimiter(',')->check(CLI::Range(1, 40));
  swn->add_option("--seeds", swn_seeds, "Division direction seeds")->delimiter(',');
  swn->add_option("--methods", swn_methods, "Integrators")
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  swn->add_flag("--run-to-end", swn_full, "Also integrate to T and report the final step");
  swn->add_option("--out", swn_out, "Output directory");
  swn_solver.add(*swn);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      ScenarioSpec spec = load_scenario_spec(sim_file);
      if (sim_seed) spec.seed = *sim_seed;
      if (sim_T) spec.T = *sim_T;
      Scenario sc = build_scenario(spec);
      if (sim_T) sc.T = *sim_T;
      const SolverConfig cfg = sim_solver.config();
      IntegrateOptions opts;
      opts.snapshot_stride = sim_stride;
      const TrajectoryRecord rec = run_scenario(sc, *parse_method(sim_method), cfg, opts);
      const fs::path dir = sim_out;
      write_dt_trace(dir / "dt_trace.csv", rec);
      write_trajectory(dir / "trajectory.csv", rec);
      nlohmann::json config = {{"scenario", to_json(spec)},
                               {"method", sim_method},
                               {"solver", sim_solver.json()},
                               {"stride", sim_stride}};
      write_json(dir / "manifest.json",
                 make_manifest("simulate", config, spec.seed, {"dt_trace.csv", "trajectory.csv"}));
      out << sim_method << ": " << rec.steps.size() << " steps, " << format_double(rec.f_evals)
          << " force evaluations, " << format_double(rec.a_evals) << " Jacobian evaluations\n";
      return 0;
    }
    if (conv->parsed()) {
      ScenarioSpec spec;
      if (!conv_file.empty()) spec = load_scenario_spec(conv_file);
      Scenario sc = build_scenario(spec);
      sc.T = conv_T;
      const auto res = convergence_study(sc, to_methods(conv_methods), conv_eps, conv_dt_ref,
                                         conv_solver.config(), sweep_threads());
      const fs::path dir = conv_out;
      write_errors(dir / "errors.csv", res.rows);
      nlohmann::json config = {{"scenario", to_json(spec)}, {"methods", method_list(conv_methods)},
                               {"eps", conv_eps},           {"dt_ref", conv_dt_ref},
                               {"T", conv_T},               {"solver", conv_solver.json()}};
      write_json(dir / "manifest.json", make_manifest("convergence", config, spec.seed, {"errors.csv"}));
      for (const auto& [m, slope] : res.slopes) {
        out << to_string(m) << " slope " << format_double(slope) << '\n';
      }
      return 0;
    }
    if (bench->parsed()) {
      ScenarioSpec spec = load_scenario_spec(bench_file);
      if (bench_seed) spec.seed = *bench_seed;
      const Scenario sc = build_scenario(spec);
      const auto rows =
          cost_benchmark(sc, to_methods(bench_methods), bench_reps, bench_solver.config());
      const fs::path dir = bench_out;
      write_cost(dir / "cost.csv", rows);
      nlohmann::json config = {{"scenario", to_json(spec)},
                               {"methods", method_list(bench_methods)},
                               {"reps", bench_reps},
                               {"solver", bench_solver.json()}};
      write_json(dir / "manifest.json", make_manifest("benchmark", config, spec.seed, {"cost.csv"}));
      for (const CostRow& r : rows) {
        out << to_string(r.method) << ": f_evals " << format_double(r.f_evals) << ", a_evals "
            << format_double(r.a_evals) << ", steps " << r.steps << '\n';
      }
      return 0;
    }
    if (swm->parsed()) {
      ScenarioSpec spec;
      spec.type = "division_in_spheroid";
      if (!swm_file.empty()) spec = load_scenario_spec(swm_file);
      if (swm_seed) spec.seed = *swm_seed;
      if (swm_m.empty()) {
        for (int m = 1; m <= 20; ++m) swm_m.push_back(m);
      }
      const auto rows = sweep_m(build_scenario(spec), swm_m, swm_solver.config());
      const fs::path dir = swm_out;
      write_sweep_m(dir / "sweep_m.csv", rows);
      nlohmann::json config = {{"scenario", to_json(spec)}, {"m", swm_m}, {"solver", swm_solver.json()}};
      write_json(dir / "manifest.json", make_manifest("sweep-m", config, spec.seed, {"sweep_m.csv"}));
      out << "optimal m " << optimal_m(rows) << '\n';
      return 0;
    }
    if (swn->parsed()) {
      const auto rows = sweep_n(swn_n, swn_seeds, to_methods(swn_methods), swn_solver.config(),
                                swn_full, sweep_threads());
      const fs::path dir = swn_out;
      write_sweep_n(dir / "sweep_n.csv", rows);
      nlohmann::json config = {{"n", swn_n},
                               {"seeds", swn_seeds},
                               {"methods", method_list(swn_methods)},
                               {"run_to_end", swn_full},
                               {"solver", swn_solver.json()}};
      write_json(dir / "manifest.json",
                 make_manifest("sweep-n", config, swn_seeds.front(), {"sweep_n.csv"}));
      for (const SweepNRow& r : rows) {
        out << "n=" << r.n_per_dim << ' ' << to_string(r.method) << " dt0 " << format_double(r.dt0)
            << '\n';
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cbm
