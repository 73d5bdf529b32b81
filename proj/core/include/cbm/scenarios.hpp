#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbm/force_law.hpp"
#include "cbm/population.hpp"
#include "cbm/rng.hpp"

namespace cbm {

/// Replacement of a mother cell by two daughters r0 apart.
struct DivisionEvent {
  double time = 0.0;
  std::optional<CellId> target;             ///< empty: uniformly random cell
  std::optional<std::vector<double>> direction;  ///< empty: random unit vector
  double r0 = 0.3;
};

struct DivisionRecord {
  double time = 0.0;
  CellId mother = 0;    ///< keeps its id and moves to x + dr
  CellId daughter = 0;  ///< new cell at x - dr
  std::vector<double> direction;
};

/// Splits a cell: the mother moves to x + dr, a new cell is appended at
/// x - dr, with dr = (r0 / 2) n. Random choices draw the target first, then
/// the direction. Throws std::invalid_argument for an unknown target, a
/// direction that is not unit length or of the wrong size.
DivisionRecord apply_division(CellPopulation& pop, const DivisionEvent& event, SeededRng& rng);

struct Scenario {
  std::string name;
  CellPopulation population;
  std::vector<DivisionEvent> events;  ///< sorted by time
  double t0 = 0.0;
  double T = 6.0;
  std::uint64_t seed = 0;
  ForceLaw law;
};

/// Population after applying every event scheduled at or before t0, using
/// the scenario's seeded stream exactly like the integrator does.
CellPopulation setup_population(const Scenario& sc);

/// n^3 cells on a hexagonal close packed lattice with nearest-neighbor
/// distance `spacing`.
CellPopulation hcp_spheroid(int n_per_dim, double spacing = 1.0);

/// Index of the free cell nearest the centroid, lowest index on ties.
std::size_t middle_cell_index(const CellPopulation& pop);

/// Two free cells r0 apart, placed symmetrically about the origin along
/// `direction` (default e_x); cell 0 sits at -r0/2 n.
Scenario two_cell_config(std::optional<std::vector<double>> direction = std::nullopt,
                         double r0 = 0.3, ForceLaw law = {}, double T = 6.0);

/// HCP spheroid whose middle cell divides at t = 0 in a seeded random (or
/// given) direction.
Scenario division_in_spheroid(int n_per_dim, std::uint64_t seed,
                              std::optional<std::vector<double>> direction = std::nullopt,
                              double r0 = 0.3, ForceLaw law = {}, double T = 6.0);

/// HCP spheroid with a random cell dividing at every i * dt_div, i = 1..n.
Scenario linear_growth(int n_init_per_dim, int n_divisions, double dt_div, std::uint64_t seed,
                       double r0 = 0.3, ForceLaw law = {});

/// n_free cells along the x axis at the given spacing, optionally with a
/// stationary cell at each end.
CellPopulation cartesian_chain(std::size_t n_free, double spacing, bool fixed_ends, int dim = 3);

}  // namespace cbm
