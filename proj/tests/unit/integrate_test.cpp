#include "cbm/integrate.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "cbm/forces.hpp"

namespace cbm {
namespace {

TEST(Integrate, EmptyInterval) {
  Scenario sc = two_cell_config();
  sc.T = 0.0;
  for (Method m : kAllMethods) {
    const TrajectoryRecord rec = run_scenario(sc, m, {});
    EXPECT_TRUE(rec.steps.empty());
    EXPECT_EQ(rec.f_evals, 0.0);
    EXPECT_EQ(rec.t_end, 0.0);
  }
}

TEST(Integrate, LandsOnEventTimesAndEnd) {
  const Scenario sc = linear_growth(3, 4, 0.37, 11);
  for (Method m : kAllMethods) {
    const TrajectoryRecord rec = run_scenario(sc, m, {});
    ASSERT_EQ(rec.event_log.size(), 4u);
    for (const auto& ev : sc.events) {
      if (ev.time >= sc.T) continue;  // applied after the last step
      bool hit = false;
      for (const auto& s : rec.steps) hit = hit || s.t == ev.time;
      EXPECT_TRUE(hit) << to_string(m) << " misses t = " << ev.time;
    }
    EXPECT_EQ(rec.t_end, sc.T);
    EXPECT_EQ(rec.steps.back().t + rec.steps.back().dt, sc.T);
    for (std::size_t k = 1; k < rec.steps.size(); ++k) {
      EXPECT_EQ(rec.steps[k].t, rec.steps[k - 1].t + rec.steps[k - 1].dt);
    }
  }
}

TEST(Integrate, EventSnapshotsBeforeAndAfter) {
  const Scenario sc = linear_growth(3, 2, 0.5, 3);
  const TrajectoryRecord rec = run_scenario(sc, Method::Srfes, {});
  std::size_t grow = 0;
  for (std::size_t k = 1; k < rec.snapshots.size(); ++k) {
    if (rec.snapshots[k].ids.size() > rec.snapshots[k - 1].ids.size()) {
      ++grow;
      EXPECT_EQ(rec.snapshots[k].t, rec.snapshots[k - 1].t);
    }
  }
  EXPECT_EQ(grow, 2u);
}

TEST(Integrate, CenterOfGravityConserved) {
  // Without stationary cells the forces cancel pairwise, so single rate
  // forward and backward Euler keep the center of gravity up to roundoff.
  for (Method m : {Method::Srfe, Method::Srfes, Method::Srbe, Method::Fixed, Method::Displacement}) {
    Scenario sc = division_in_spheroid(3, 6);
    sc.T = 2.0;
    const CellPopulation start = setup_population(sc);
    CellPopulation end;
    run_scenario(sc, m, {}, {}, &end);
    const auto g0 = center_of_gravity(start);
    const auto g1 = center_of_gravity(end);
    for (int l = 0; l < 3; ++l) EXPECT_NEAR(g0[l], g1[l], 1e-10) << to_string(m);
  }
}

TEST(Integrate, MultirateShiftsCenterOfGravity) {
  // Fast cells feel their slow neighbors through m substeps while the slow
  // cells take one step, so pair forces no longer cancel exactly.
  Scenario sc = division_in_spheroid(3, 6);
  sc.T = 0.5;
  CellPopulation end;
  run_scenario(sc, Method::Mrfe, {}, {}, &end);
  const auto g0 = center_of_gravity(setup_population(sc));
  const auto g1 = center_of_gravity(end);
  double drift = 0;
  for (int l = 0; l < 3; ++l) drift = std::max(drift, std::abs(g1[l] - g0[l]));
  EXPECT_GT(drift, 1e-8);
  EXPECT_LT(drift, 1e-3);
}

TEST(Integrate, PotentialDecreases) {
  // Backward Euler with small steps decreases V monotonically. Forward
  // Euler close to the stability limit only keeps V bounded, so the
  // explicit methods are checked over the whole run.
  for (Method m : {Method::Srfes, Method::Mrfe, Method::Srbe}) {
    Scenario sc = division_in_spheroid(3, 8);
    sc.T = 3.0;
    const PotentialOptions cont{.include_ga_offset = true};
    const double v0 = total_potential(setup_population(sc), sc.law, cont);
    double v = v0;
    IntegrateOptions opts;
    opts.observer = [&](const StepView& view) {
      const double vn = total_potential(view.x_after, {}, 3, sc.law, cont);
      if (m == Method::Srbe) EXPECT_LE(vn, v + 1e-9) << "at t = " << view.t;
      v = vn;
    };
    run_scenario(sc, m, {}, opts);
    EXPECT_LT(v, v0) << to_string(m);
  }
}

TEST(Integrate, RepeatableForSameSeed) {
  const Scenario sc = linear_growth(3, 3, 0.5, 21);
  const TrajectoryRecord a = run_scenario(sc, Method::Mrfe, {});
  const TrajectoryRecord b = run_scenario(sc, Method::Mrfe, {});
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  EXPECT_EQ(a.snapshots.back().x, b.snapshots.back().x);
  EXPECT_EQ(a.f_evals, b.f_evals);
}

TEST(Integrate, UnderflowThrows) {
  Scenario sc = two_cell_config();
  SolverConfig cfg;
  cfg.epsilon = 1e-30;
  EXPECT_THROW(run_scenario(sc, Method::Srfe, cfg), IntegrationError);
}

TEST(Integrate, MaxStepsThrows) {
  IntegrateOptions opts;
  opts.max_steps = 3;
  EXPECT_THROW(run_scenario(two_cell_config(), Method::Fixed, {}, opts), IntegrationError);
}

TEST(Integrate, SnapshotStrideZeroKeepsEnds) {
  IntegrateOptions opts;
  opts.snapshot_stride = 0;
  const Scenario sc = two_cell_config();
  const TrajectoryRecord rec = run_scenario(sc, Method::Srfes, {}, opts);
  ASSERT_GE(rec.snapshots.size(), 2u);
  EXPECT_EQ(rec.snapshots.front().t, 0.0);
  EXPECT_EQ(rec.snapshots.back().t, sc.T);
}

TEST(Integrate, CumulativeCountsMatchTotals) {
  const TrajectoryRecord rec = run_scenario(two_cell_config(), Method::Srbe, {});
  ASSERT_FALSE(rec.steps.empty());
  EXPECT_DOUBLE_EQ(rec.steps.back().f_evals, rec.f_evals);
  EXPECT_DOUBLE_EQ(rec.steps.back().a_evals, rec.a_evals);
}

TEST(Method, Names) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("rk4"));
}

}  // namespace
}  // namespace cbm
