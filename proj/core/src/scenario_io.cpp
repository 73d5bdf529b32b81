#include "cbm/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cbm {
namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& value) {
  if (!j.contains(key)) return;
  try {
    value = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("scenario field '") + key + "' has the wrong type");
  }
}

}  // namespace

ScenarioSpec scenario_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  int version = kScenarioSchemaVersion;
  read_field(j, "schema_version", version);
  if (version != kScenarioSchemaVersion) {
    throw std::invalid_argument("unsupported scenario schema_version " + std::to_string(version));
  }
  ScenarioSpec spec;
  read_field(j, "type", spec.type);
  read_field(j, "n_per_dim", spec.n_per_dim);
  read_field(j, "r0", spec.r0);
  read_field(j, "dt_div", spec.dt_div);
  read_field(j, "n_divisions", spec.n_divisions);
  read_field(j, "seed", spec.seed);
  read_field(j, "T", spec.T);
  if (j.contains("direction")) {
    std::vector<double> dir;
    read_field(j, "direction", dir);
    spec.direction = std::move(dir);
  }
  if (j.contains("force")) {
    const auto& f = j.at("force");
    if (!f.is_object()) throw std::invalid_argument("scenario field 'force' must be an object");
    read_field(f, "mu", spec.mu);
    read_field(f, "s", spec.s);
    read_field(f, "rA", spec.r_a);
  }

  if (spec.type != "two_cells" && spec.type != "division_in_spheroid" &&
      spec.type != "linear_growth") {
    throw std::invalid_argument("unknown scenario type '" + spec.type + "'");
  }
  if (spec.n_per_dim < 1) throw std::invalid_argument("n_per_dim must be at least 1");
  if (!(spec.r0 > 0.0 && spec.r0 < spec.s)) {
    throw std::invalid_argument("r0 must lie in (0, s)");
  }
  if (!(spec.dt_div > 0.0)) throw std::invalid_argument("dt_div must be positive");
  if (spec.n_divisions < 1) throw std::invalid_argument("n_divisions must be at least 1");
  if (!(spec.T > 0.0) || !std::isfinite(spec.T)) throw std::invalid_argument("T must be positive");
  if (spec.direction) {
    double len2 = 0.0;
    for (double e : *spec.direction) len2 += e * e;
    if (spec.direction->empty() || spec.direction->size() > 3 || !(len2 > 0.0)) {
      throw std::invalid_argument("direction must be a non-zero vector of length 1 to 3");
    }
    for (double& e : *spec.direction) e /= std::sqrt(len2);
    if (spec.type != "two_cells" && spec.direction->size() != 3) {
      throw std::invalid_argument("spheroid scenarios need a 3D direction");
    }
  }
  ForceLaw(spec.mu, spec.s, spec.r_a);  // validates the parameters
  return spec;
}

nlohmann::json to_json(const ScenarioSpec& spec) {
  nlohmann::json j = {{"schema_version", kScenarioSchemaVersion},
                      {"type", spec.type},
                      {"n_per_dim", spec.n_per_dim},
                      {"r0", spec.r0},
                      {"dt_div", spec.dt_div},
                      {"n_divisions", spec.n_divisions},
                      {"seed", spec.seed},
                      {"T", spec.T},
                      {"force", {{"mu", spec.mu}, {"s", spec.s}, {"rA", spec.r_a}}}};
  if (spec.direction) j["direction"] = *spec.direction;
  return j;
}

ScenarioSpec load_scenario_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("scenario file " + path.string() + " is not valid JSON: " +
                                e.what());
  }
  return scenario_spec_from_json(j);
}

Scenario build_scenario(const ScenarioSpec& spec) {
  const ForceLaw law(spec.mu, spec.s, spec.r_a);
  Scenario sc;
  if (spec.type == "two_cells") {
    sc = two_cell_config(spec.direction, spec.r0, law, spec.T);
  } else if (spec.type == "division_in_spheroid") {
    sc = division_in_spheroid(spec.n_per_dim, spec.seed, spec.direction, spec.r0, law, spec.T);
  } else if (spec.type == "linear_growth") {
    // The end time follows from the schedule.
    sc = linear_growth(spec.n_per_dim, spec.n_divisions, spec.dt_div, spec.seed, spec.r0, law);
  } else {
    throw std::invalid_argument("unknown scenario type '" + spec.type + "'");
  }
  sc.seed = spec.seed;
  return sc;
}

}  // namespace cbm
