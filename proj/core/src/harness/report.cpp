#include "cbm/harness/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cbm {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const nlohmann::json& config) { return fnv1a_hex(config.dump()); }

void write_dt_trace(const std::filesystem::path& path, const TrajectoryRecord& rec) {
  auto out = open_out(path);
  out << "t,dt,constraint,n_fast_equations\n";
  for (const StepRecord& s : rec.steps) {
    out << format_double(s.t) << ',' << format_double(s.dt) << ',' << to_string(s.constraint)
        << ',' << s.n_fast << '\n';
  }
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& rec) {
  auto out = open_out(path);
  out << "t,cell_id,x,y,z\n";
  const int d = rec.dim;
  for (const Snapshot& s : rec.snapshots) {
    for (std::size_t i = 0; i < s.ids.size(); ++i) {
      out << format_double(s.t) << ',' << s.ids[i];
      for (int l = 0; l < 3; ++l) {
        out << ',' << format_double(l < d ? s.x[i * d + l] : 0.0);
      }
      out << '\n';
    }
  }
}

void write_errors(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  auto out = open_out(path);
  out << "eps,method,rel_error\n";
  for (const ConvergenceRow& r : rows) {
    out << format_double(r.epsilon) << ',' << to_string(r.method) << ','
        << format_double(r.rel_error) << '\n';
  }
}

void write_cost(const std::filesystem::path& path, const std::vector<CostRow>& rows) {
  auto out = open_out(path);
  out << "method,f_evals,a_evals,steps,wall_s,rel_wall\n";
  for (const CostRow& r : rows) {
    out << to_string(r.method) << ',' << format_double(r.f_evals) << ','
        << format_double(r.a_evals) << ',' << r.steps << ',' << format_double(r.wall_s) << ','
        << format_double(r.rel_wall) << '\n';
  }
}

void write_sweep_m(const std::filesystem::path& path, const std::vector<SweepMRow>& rows) {
  auto out = open_out(path);
  out << "m,tau1,tau0,n_fast_equations,dt_stability,constraint\n";
  for (const SweepMRow& r : rows) {
    out << r.m << ',' << format_double(r.tau1) << ',' << format_double(r.tau0) << ','
        << r.n_fast << ',' << format_double(r.dt_stability) << ',' << to_string(r.constraint)
        << '\n';
  }
}

void write_sweep_n(const std::filesystem::path& path, const std::vector<SweepNRow>& rows) {
  auto out = open_out(path);
  out << "n_per_dim,n_cells,method,dt0,n_fast0,dt_final\n";
  for (const SweepNRow& r : rows) {
    out << r.n_per_dim << ',' << r.n_cells << ',' << to_string(r.method) << ','
        << format_double(r.dt0) << ',' << format_double(r.n_fast0) << ','
        << format_double(r.dt_final) << '\n';
  }
}

std::string_view library_version() { return "0.1.0"; }

nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config,
                             std::uint64_t seed, const std::vector<std::string>& outputs) {
  return {{"command", command},
          {"config", config},
          {"config_hash", config_hash(config)},
          {"seed", seed},
          {"version", library_version()},
          {"outputs", outputs}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace cbm
