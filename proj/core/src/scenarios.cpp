#include "cbm/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbm {

DivisionRecord apply_division(CellPopulation& pop, const DivisionEvent& event, SeededRng& rng) {
  const int d = pop.dim();
  if (pop.size() == 0) throw std::invalid_argument("no cell to divide");
  std::size_t idx = 0;
  if (event.target) {
    const auto& ids = pop.ids();
    const auto it = std::find(ids.begin(), ids.end(), *event.target);
    if (it == ids.end()) throw std::invalid_argument("division target does not exist");
    idx = static_cast<std::size_t>(it - ids.begin());
  } else {
    idx = static_cast<std::size_t>(rng.below(pop.size()));
  }
  std::vector<double> n;
  if (event.direction) {
    n = *event.direction;
    if (n.size() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("division direction has wrong dimension");
    }
    double len2 = 0.0;
    for (double e : n) len2 += e * e;
    if (std::abs(std::sqrt(len2) - 1.0) > 1e-12) {
      throw std::invalid_argument("division direction must be a unit vector");
    }
  } else {
    n = random_unit_vector(rng, d);
  }

  DivisionRecord rec;
  rec.time = event.time;
  rec.mother = pop.ids()[idx];
  rec.direction = n;
  std::vector<double> other(d);
  auto mother = pop.position(idx);
  for (int l = 0; l < d; ++l) {
    const double dr = 0.5 * event.r0 * n[l];
    other[l] = mother[l] - dr;
    mother[l] += dr;
  }
  rec.daughter = pop.add_cell(other);
  return rec;
}

CellPopulation setup_population(const Scenario& sc) {
  CellPopulation pop = sc.population;
  SeededRng rng(sc.seed);
  for (const DivisionEvent& ev : sc.events) {
    if (ev.time <= sc.t0) apply_division(pop, ev, rng);
  }
  return pop;
}

CellPopulation hcp_spheroid(int n_per_dim, double spacing) {
  if (n_per_dim < 1) throw std::invalid_argument("n_per_dim must be at least 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  const double h = 0.5 * spacing;
  const double sqrt3 = std::sqrt(3.0);
  const double zfac = 2.0 * std::sqrt(6.0) / 3.0;
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n_per_dim) * n_per_dim * n_per_dim * 3);
  for (int k = 0; k < n_per_dim; ++k) {
    for (int j = 0; j < n_per_dim; ++j) {
      for (int i = 0; i < n_per_dim; ++i) {
        x.push_back((2 * i + ((j + k) % 2)) * h);
        x.push_back(sqrt3 * (j + (k % 2) / 3.0) * h);
        x.push_back(zfac * k * h);
      }
    }
  }
  return CellPopulation(3, std::move(x));
}

std::size_t middle_cell_index(const CellPopulation& pop) {
  const std::vector<double> c = center_of_gravity(pop);
  const int d = pop.dim();
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto p = pop.position(i);
    double d2 = 0.0;
    for (int l = 0; l < d; ++l) d2 += (p[l] - c[l]) * (p[l] - c[l]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

Scenario two_cell_config(std::optional<std::vector<double>> direction, double r0, ForceLaw law,
                         double T) {
  std::vector<double> n = direction.value_or(std::vector<double>{1.0, 0.0, 0.0});
  const int d = static_cast<int>(n.size());
  std::vector<double> x(2 * n.size());
  for (int l = 0; l < d; ++l) {
    x[l] = -0.5 * r0 * n[l];
    x[d + l] = 0.5 * r0 * n[l];
  }
  Scenario sc;
  sc.name = "two_cells";
  sc.population = CellPopulation(d, std::move(x));
  sc.T = T;
  sc.law = law;
  return sc;
}

Scenario division_in_spheroid(int n_per_dim, std::uint64_t seed,
                              std::optional<std::vector<double>> direction, double r0,
                              ForceLaw law, double T) {
  Scenario sc;
  sc.name = "division_in_spheroid";
  sc.population = hcp_spheroid(n_per_dim, law.rest_length());
  const std::size_t mid = middle_cell_index(sc.population);
  DivisionEvent ev;
  ev.time = 0.0;
  ev.target = sc.population.ids()[mid];
  ev.direction = std::move(direction);
  ev.r0 = r0;
  sc.events.push_back(std::move(ev));
  sc.T = T;
  sc.seed = seed;
  sc.law = law;
  return sc;
}

Scenario linear_growth(int n_init_per_dim, int n_divisions, double dt_div, std::uint64_t seed,
                       double r0, ForceLaw law) {
  if (n_divisions < 1) throw std::invalid_argument("need at least one division");
  if (!(dt_div > 0.0)) throw std::invalid_argument("division interval must be positive");
  Scenario sc;
  sc.name = "linear_growth";
  sc.population = hcp_spheroid(n_init_per_dim, law.rest_length());
  for (int i = 1; i <= n_divisions; ++i) {
    DivisionEvent ev;
    ev.time = i * dt_div;
    ev.r0 = r0;
    sc.events.push_back(std::move(ev));
  }
  sc.T = n_divisions * dt_div;
  sc.seed = seed;
  sc.law = law;
  return sc;
}

CellPopulation cartesian_chain(std::size_t n_free, double spacing, bool fixed_ends, int dim) {
  std::vector<double> x(n_free * dim, 0.0);
  for (std::size_t i = 0; i < n_free; ++i) x[i * dim] = (i + 1) * spacing;
  std::vector<double> fixed;
  if (fixed_ends) {
    fixed.assign(2 * dim, 0.0);
    fixed[dim] = (n_free + 1) * spacing;
  }
  return CellPopulation(dim, std::move(x), std::move(fixed));
}

}  // namespace cbm
