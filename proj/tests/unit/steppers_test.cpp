#include "cbm/steppers.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "cbm/forces.hpp"
#include "cbm/integrate.hpp"
#include "cbm/scenarios.hpp"
#include "oracles.hpp"

namespace cbm {
namespace {

const ForceLaw kLaw;
const double kDtStable = 1.0 / 1.425;  // 1 / g'(s)

// Wraps a model and counts what the steppers ask of it.
class CountingModel final : public ForceModel {
 public:
  explicit CountingModel(int dim) : inner_(kLaw, dim) {}
  int dim() const override { return inner_.dim(); }
  void force(std::span<const double> x, std::span<double> out) override {
    ++full;
    inner_.force(x, out);
  }
  void force_rows(std::span<const double> x, std::span<const std::uint32_t> cells,
                  std::span<double> out) override {
    rows += cells.size();
    inner_.force_rows(x, cells, out);
  }
  BlockJacobian jacobian(std::span<const double> x) override {
    ++jac;
    return inner_.jacobian(x);
  }
  double interaction_radius() const override { return inner_.interaction_radius(); }
  void invalidate() override { inner_.invalidate(); }

  std::size_t full = 0;
  std::size_t rows = 0;
  std::size_t jac = 0;

 private:
  CellForceModel inner_;
};

std::vector<double> pair_at(double r, std::vector<double> n = {1, 0, 0}) {
  std::vector<double> x(6);
  for (int l = 0; l < 3; ++l) {
    x[l] = -0.5 * r * n[l];
    x[3 + l] = 0.5 * r * n[l];
  }
  return x;
}

TEST(Srfe, PostDivisionStep) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.3);
  const StepOutcome out = srfe_step(model, x, SolverConfig{});
  EXPECT_NEAR(out.decision.dt, 0.006996, 1e-4);
  EXPECT_NEAR(out.decision.dt, std::sqrt(0.01 / (2 * 17.784 * 5.7456)), 2e-5);
  EXPECT_EQ(out.decision.constraint, Constraint::Accuracy);
  EXPECT_EQ(out.f_evals, 2.0);
  EXPECT_EQ(out.a_evals, 0u);
  EXPECT_GT(x[3] - x[0], 0.3);
}

TEST(Srfe, EquilibriumUsesCap) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(1.0);
  const auto before = x;
  SolverConfig cfg;
  const StepOutcome out = srfe_step(model, x, cfg);
  EXPECT_EQ(out.decision.dt, cfg.dt_max_cap);
  EXPECT_EQ(x, before);
  const StepOutcome cut = srfe_step(model, x, cfg, 0.25);
  EXPECT_EQ(cut.decision.dt, 0.25);
  EXPECT_EQ(cut.decision.constraint, Constraint::EventTruncation);
}

TEST(Srfes, SameInitialStepAsSrfe) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.3);
  auto y = x;
  const double a = srfe_step(model, x, {}).decision.dt;
  const StepOutcome b = srfes_step(model, y, {});
  EXPECT_NEAR(a, b.decision.dt, 1e-3 * a);
  EXPECT_EQ(b.decision.constraint, Constraint::Accuracy);
  EXPECT_NEAR(b.decision.dt_stability, 2.0 / (2 * 17.784), 1e-12);
  EXPECT_NEAR(b.decision.dt_stability, 0.05623, 1e-5);
}

TEST(Srfes, NearEquilibriumIsStabilityBound) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(1.0 - 1e-7);
  const StepOutcome out = srfes_step(model, x, {});
  EXPECT_EQ(out.decision.constraint, Constraint::Stability);
  EXPECT_NEAR(out.decision.dt, kDtStable, 1e-5);
}

TEST(Srfes, SpheroidStabilityBoundBelowTrueBound) {
  // Gershgorin underestimates lambda_min, so the SRFES bound is smaller than
  // 2 / |lambda_min| of the dense spectrum.
  const CellPopulation pop = hcp_spheroid(3);
  CellForceModel model(kLaw, 3);
  std::vector<double> x(pop.positions().begin(), pop.positions().end());
  const BlockJacobian a = model.jacobian(x);
  const double lmin = oracle::eigenvalues(oracle::dense(a)).minCoeff();
  EXPECT_LT(stability_bound(a.gershgorin()), 2.0 / std::abs(lmin));
}

TEST(Steppers, LocalErrorWithinTolerance) {
  for (Method m : {Method::Srfes, Method::Mrfe}) {
    Scenario sc = division_in_spheroid(3, 4);
    sc.T = 1.0;
    SolverConfig cfg;
    IntegrateOptions opts;
    opts.observer = [&](const StepView& v) {
      if (v.outcome.decision.constraint == Constraint::Accuracy) {
        EXPECT_LE(v.outcome.local_error, cfg.epsilon * (1 + 1e-12));
      }
    };
    run_scenario(sc, m, cfg, opts);
  }
}

TEST(Mrfe, InitialLevelsAfterDivision) {
  const CellPopulation start = setup_population(division_in_spheroid(6, 7));
  CellPopulation pop = start;
  CellForceModel model(kLaw, 3);
  const StepOutcome out = mrfe_macro_step(model, pop.positions(), SolverConfig{});
  ASSERT_TRUE(out.levels);
  EXPECT_EQ(out.decision.constraint, Constraint::Accuracy);
  EXPECT_NEAR(out.levels->tau1, 0.02617, 0.05 * 0.02617);
  EXPECT_DOUBLE_EQ(out.levels->tau0, out.levels->tau1 / 14);
  EXPECT_EQ(out.levels->k_fast.size(), 6u);
  EXPECT_EQ(out.levels->k_fast.size() + out.levels->k_slow.size(), pop.positions().size());
}

TEST(Mrfe, IsolatedPairValues) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.3);
  const StepOutcome out = mrfe_macro_step(model, x, SolverConfig{});
  EXPECT_NEAR(out.decision.dt_accuracy, std::sqrt(2 * 0.005 * 14 / 204.3638), 1e-5);
  EXPECT_NEAR(out.decision.dt_stability, 0.05623, 1e-5);
}

TEST(Mrfe, EquilibriumIsSingleLevel) {
  const auto rest = oracle::resting_grid(4, 3, 2);
  auto x = rest;
  CellForceModel model(kLaw, 3);
  const StepOutcome out = mrfe_macro_step(model, x, SolverConfig{});
  EXPECT_TRUE(out.levels->k_fast.empty());
  EXPECT_EQ(x, rest);
}

TEST(Mrfe, RatioOneIsSrfes) {
  SolverConfig cfg;
  cfg.m = 1;
  const CellPopulation start = setup_population(division_in_spheroid(3, 2));
  std::vector<double> a(start.positions().begin(), start.positions().end());
  auto b = a;
  CellForceModel ma(kLaw, 3), mb(kLaw, 3);
  for (int k = 0; k < 30; ++k) {
    const StepOutcome oa = mrfe_macro_step(ma, a, cfg);
    const StepOutcome ob = srfes_step(mb, b, cfg);
    ASSERT_EQ(oa.decision.dt, ob.decision.dt);
    ASSERT_EQ(a, b);
  }
}

TEST(Mrfe, LocalErrorAgainstFineReference) {
  // Reference: every cell advanced by m forward Euler steps of tau0. The
  // deviation of the fast cells after the m substeps already accumulates
  // the m substep errors. The bound is leading order; on later macro steps
  // eta changes noticeably within tau1 and the slow deviation can exceed
  // eps by a few percent.
  for (std::uint64_t seed : {1, 7, 9}) {
    const CellPopulation start = setup_population(division_in_spheroid(3, seed));
    SolverConfig cfg;
    std::vector<double> x(start.positions().begin(), start.positions().end());
    CellForceModel model(kLaw, 3);
    for (int step = 0; step < 5; ++step) {
      std::vector<double> ref = x;
      const StepOutcome out = mrfe_macro_step(model, x, cfg);
      const auto& lv = *out.levels;
      if (lv.k_fast.empty()) break;
      CellForceModel rm(kLaw, 3);
      for (int k = 0; k < lv.m; ++k) fixed_step(rm, ref, lv.tau0);
      double e0 = 0, e1 = 0;
      for (auto k : lv.k_fast) e0 = std::max(e0, std::abs(x[k] - ref[k]));
      for (auto k : lv.k_slow) e1 = std::max(e1, std::abs(x[k] - ref[k]));
      const double limit = step == 0 ? cfg.epsilon : 1.1 * cfg.epsilon;
      EXPECT_LE(std::max(e0, e1), limit) << "seed " << seed << " step " << step;
    }
  }
}

TEST(Srbe, SteadyStateIsFixedPoint) {
  const auto before = oracle::resting_grid(4, 3, 2);
  auto x = before;
  CellForceModel model(kLaw, 3);
  const StepOutcome out = srbe_step(model, x, SolverConfig{});
  EXPECT_EQ(x, before);
  EXPECT_TRUE(out.newton->converged);
  EXPECT_LE(out.newton->newton_iters, 1u);
}

TEST(Srbe, PotentialDecreases) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.3, {0.6, 0.0, 0.8});
  double v = total_potential(x, {}, 3, kLaw);
  for (int k = 0; k < 25; ++k) {
    srbe_step(model, x, SolverConfig{});
    const double vn = total_potential(x, {}, 3, kLaw);
    EXPECT_LE(vn, v + 1e-10);
    v = vn;
  }
}

TEST(FixedStep, UnstableAboveBound) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.98);
  std::vector<double> prev = x;
  double last = 0.0;
  int growth = 0;
  for (int k = 0; k < 30; ++k) {
    fixed_step(model, x, 1.1 * kDtStable);
    double d = 0;
    for (int c = 0; c < 6; ++c) d += (x[c] - prev[c]) * (x[c] - prev[c]);
    d = std::sqrt(d);
    if (k > 0 && d > last) ++growth;
    last = d;
    prev = x;
  }
  EXPECT_GT(growth, 20);
}

TEST(FixedStep, StableBelowBound) {
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.98);
  for (int k = 0; k < 60; ++k) fixed_step(model, x, 0.9 * kDtStable);
  EXPECT_NEAR(x[3] - x[0], 1.0, 1e-3);
}

TEST(Displacement, Values) {
  const std::vector<double> f = {-5.7456, 0, 0, 5.7456, 0, 0};
  EXPECT_NEAR(displacement_bound_dt(f, 0.005), 8.702e-4, 1e-7);
  EXPECT_EQ(displacement_bound_dt(std::vector<double>(6, 0.0), 0.005, 10.0), 10.0);
}

TEST(Displacement, LargeStepNearEquilibrium) {
  // Small force, steep curvature: limiting the displacement allows a much
  // larger step than the local error bound.
  CellForceModel model(kLaw, 3);
  auto x = pair_at(0.999);
  auto y = x;
  const StepOutcome d = displacement_step(model, x, SolverConfig{});
  const StepOutcome a = srfes_step(model, y, SolverConfig{});
  EXPECT_GT(d.decision.dt, a.decision.dt_accuracy);
}

TEST(Steppers, SteadyStateFixedPointForAllMethods) {
  const auto rest = oracle::resting_grid(4, 3, 2);
  ASSERT_EQ(oracle::brute_force(rest, {}, 3), std::vector<double>(rest.size(), 0.0));
  for (Method m : kAllMethods) {
    auto x = rest;
    CellForceModel model(kLaw, 3);
    for (int k = 0; k < 3; ++k) take_step(m, model, x, SolverConfig{}, kInf);
    EXPECT_EQ(x, rest) << to_string(m);
  }
}

TEST(Steppers, FixedStepCommutesWithRigidMotion) {
  SeededRng rng(3);
  const auto x = oracle::random_cluster(rng, 12, 3, 1.8, 0.4);
  const Eigen::Matrix3d q =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
  const Eigen::Vector3d c(0.3, -1.0, 2.0);
  auto transform = [&](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size() / 3; ++i) {
      const Eigen::Vector3d p = q * Eigen::Vector3d(v[3 * i], v[3 * i + 1], v[3 * i + 2]) + c;
      for (int l = 0; l < 3; ++l) out[3 * i + l] = p[l];
    }
    return out;
  };
  CellForceModel model(kLaw, 3);
  // Forward Euler.
  auto a = transform(x);
  auto b = x;
  fixed_step(model, a, 0.01);
  fixed_step(model, b, 0.01);
  b = transform(b);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
  // Backward Euler.
  NewtonOptions opts;
  opts.tol = 1e-13;
  opts.gmres = {1e-14, 1e-14, 36};
  const auto ba = newton_solve(model, transform(x), 0.05, opts);
  const auto bb = transform(newton_solve(model, x, 0.05, opts));
  for (std::size_t k = 0; k < ba.size(); ++k) EXPECT_NEAR(ba[k], bb[k], 1e-10);
}

TEST(Steppers, EvaluationCountsMatchCalls) {
  const CellPopulation start = setup_population(division_in_spheroid(3, 5));
  for (Method m : kAllMethods) {
    std::vector<double> x(start.positions().begin(), start.positions().end());
    CountingModel model(3);
    double f = 0, a = 0;
    for (int k = 0; k < 20; ++k) {
      const StepOutcome out = take_step(m, model, x, SolverConfig{}, kInf);
      f += out.f_evals;
      a += static_cast<double>(out.a_evals);
    }
    const double expect_f =
        static_cast<double>(model.full) + static_cast<double>(model.rows) / start.size();
    EXPECT_NEAR(f, expect_f, 1e-9) << to_string(m);
    EXPECT_EQ(a, static_cast<double>(model.jac)) << to_string(m);
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.m = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.epsilon = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  EXPECT_DOUBLE_EQ(cfg.eps_newton(), 5e-6);
  EXPECT_DOUBLE_EQ(cfg.eps_gmres(), 5e-6);
}

}  // namespace
}  // namespace cbm
