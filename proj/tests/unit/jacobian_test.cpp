#include "cbm/jacobian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "cbm/model.hpp"
#include "cbm/steppers.hpp"
#include "cbm/scenarios.hpp"
#include "oracles.hpp"

namespace cbm {
namespace {

const ForceLaw kLaw;

BlockJacobian assemble_x(const std::vector<double>& x, const std::vector<double>& st = {},
                         int d = 3) {
  return assemble(x, st, d, kLaw, build_neighbor_list(x, st, d, kLaw.cutoff()));
}

std::vector<double> force_x(const std::vector<double>& x, const std::vector<double>& st = {},
                            int d = 3) {
  return oracle::brute_force(x, st, d);
}

TEST(PairBlock, AxisAlignedValues) {
  const double a[3] = {0, 0, 0};
  const double b[3] = {0.3, 0, 0};
  const Block blk = pair_block(pair_geometry(a, b, 3), 3, kLaw);
  EXPECT_NEAR(blk[0], 17.784, 1e-12);
  EXPECT_NEAR(blk[4], -19.152, 1e-12);
  EXPECT_NEAR(blk[8], -19.152, 1e-12);
  for (int k : {1, 2, 3, 5, 6, 7}) EXPECT_EQ(blk[k], 0.0);
}

TEST(PairBlock, RestLengthIsPurelyRadial) {
  const double a[3] = {0, 0, 0};
  const double b[3] = {0.6, 0.8, 0};
  const Block blk = pair_block(pair_geometry(a, b, 3), 3, kLaw);
  const double n[3] = {0.6, 0.8, 0};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(blk[i * 3 + j], n[i] * n[j] * 1.425, 1e-14);
  }
}

TEST(PairBlock, EigenAction) {
  const double a[3] = {0.1, 0.2, -0.1};
  const double b[3] = {0.5, 0.9, 0.3};
  const PairGeometry geo = pair_geometry(a, b, 3);
  const Block blk = pair_block(geo, 3, kLaw);
  const Eigen::Vector3d n(geo.r_hat[0], geo.r_hat[1], geo.r_hat[2]);
  const Eigen::Vector3d m = n.unitOrthogonal();
  Eigen::Matrix3d bm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bm(i, j) = blk[i * 3 + j];
  EXPECT_LT((bm * n - kLaw.force_derivative(geo.r) * n).norm(), 1e-13);
  EXPECT_LT((bm * m - kLaw.force(geo.r) / geo.r * m).norm(), 1e-13);
}

TEST(PairBlock, CoincidentThrows) {
  const double a[3] = {1, 1, 1};
  EXPECT_THROW(pair_block(pair_geometry(a, a, 3), 3, kLaw), std::domain_error);
}

TEST(Assemble, TwoFreeCellsStructure) {
  const BlockJacobian a = assemble_x({0, 0, 0, 0.3, 0, 0});
  const Eigen::MatrixXd m = oracle::dense(a);
  const Eigen::Matrix3d b = m.block(0, 3, 3, 3);
  EXPECT_NEAR(b(0, 0), 17.784, 1e-12);
  EXPECT_TRUE(m.block(0, 0, 3, 3).isApprox(-b));
  EXPECT_TRUE(m.block(3, 3, 3, 3).isApprox(-b));
  EXPECT_TRUE(m.block(3, 0, 3, 3).isApprox(b));
}

TEST(Assemble, StationaryNeighborOnlyInDiagonal) {
  const BlockJacobian a = assemble_x({0, 0, 0}, {0.3, 0, 0});
  ASSERT_EQ(a.rows(), 3u);
  const Eigen::MatrixXd m = oracle::dense(a);
  EXPECT_NEAR(m(0, 0), -17.784, 1e-12);
  EXPECT_NEAR(m(1, 1), 19.152, 1e-12);
}

TEST(Assemble, MatchesCentralDifferences) {
  SeededRng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    auto all = oracle::random_cluster(rng, 24, 3, 2.8, 0.25);
    std::vector<double> st(all.end() - 4 * 3, all.end());
    all.resize(all.size() - 4 * 3);
    const BlockJacobian a = assemble_x(all, st);
    std::vector<double> dir(all.size());
    for (double& c : dir) c = rng.uniform() - 0.5;
    const double h = 1e-6;
    auto xp = all, xm = all;
    for (std::size_t k = 0; k < all.size(); ++k) {
      xp[k] += h * dir[k];
      xm[k] -= h * dir[k];
    }
    const auto fp = force_x(xp, st);
    const auto fm = force_x(xm, st);
    const auto av = a.apply(dir);
    for (std::size_t k = 0; k < all.size(); ++k) {
      EXPECT_NEAR(av[k], (fp[k] - fm[k]) / (2 * h), 1e-5);
    }
  }
}

TEST(Assemble, ExactlySymmetric) {
  SeededRng rng(2);
  const auto x = oracle::random_cluster(rng, 30, 3, 3.0);
  const Eigen::MatrixXd m = oracle::dense(assemble_x(x));
  EXPECT_EQ((m - m.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assemble, TranslationNullspace) {
  SeededRng rng(6);
  const auto x = oracle::random_cluster(rng, 20, 3, 2.5);
  const BlockJacobian a = assemble_x(x);
  for (int l = 0; l < 3; ++l) {
    std::vector<double> t(x.size(), 0.0);
    for (std::size_t i = 0; i < 20; ++i) t[i * 3 + l] = 1.0;
    for (double c : a.apply(t)) EXPECT_NEAR(c, 0.0, 1e-10);
  }
}

TEST(Assemble, PostDivisionSpectrum) {
  for (double r0 : {0.3, 0.5, 0.9, 1.2}) {
    const auto n = std::vector<double>{0.48, -0.6, 0.64};
    std::vector<double> x(6);
    for (int l = 0; l < 3; ++l) {
      x[l] = 0.5 * r0 * n[l];
      x[3 + l] = -0.5 * r0 * n[l];
    }
    Eigen::VectorXd ev = oracle::eigenvalues(oracle::dense(assemble_x(x)));
    std::vector<double> expect = {0, 0, 0, -2 * oracle::dg(r0), -2 * oracle::g(r0) / r0,
                                  -2 * oracle::g(r0) / r0};
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(ev[k], expect[k], 1e-8) << "r0 = " << r0;
  }
}

TEST(Gershgorin, TwoCellsAtRestLengthIsTight) {
  const BlockJacobian a = assemble_x({0, 0, 0, 1, 0, 0});
  EXPECT_NEAR(gershgorin_min(a), -2.85, 1e-12);
  EXPECT_NEAR(oracle::eigenvalues(oracle::dense(a)).minCoeff(), -2.85, 1e-12);
}

TEST(Gershgorin, FixedEndChain) {
  const CellPopulation chain = cartesian_chain(3, 1.0, true);
  const BlockJacobian a = assemble(chain, kLaw, build_neighbor_list(chain, 1.5));
  EXPECT_NEAR(gershgorin_min(a), -4 * 1.425, 1e-12);
  const double lmin = oracle::eigenvalues(oracle::dense(a)).minCoeff();
  EXPECT_NEAR(lmin, -2 * (1 - std::cos(3 * std::numbers::pi / 4)) * 1.425, 1e-6);
  EXPECT_LE(gershgorin_min(a), lmin);
}

TEST(Gershgorin, SoundOnRandomPopulations) {
  SeededRng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(39);
    const auto x = oracle::random_cluster(rng, n, 3, 1.0 + 0.1 * n, 0.2);
    const BlockJacobian a = assemble_x(x);
    const Eigen::VectorXd ev = oracle::eigenvalues(oracle::dense(a));
    const EigenEstimate est = a.gershgorin();
    EXPECT_LE(est.lambda_min_est, ev.minCoeff() + 1e-12);
    EXPECT_GE(est.lambda_max_est, ev.maxCoeff() - 1e-12);
  }
}

TEST(Gershgorin, NoInteractionsGivesZero) {
  const BlockJacobian a = assemble_x({0, 0, 0, 2, 0, 0, 4, 0, 0});
  EXPECT_EQ(gershgorin_min(a), 0.0);
  EXPECT_EQ(stability_bound(a.gershgorin()), kInf);
}

TEST(Gershgorin, PrincipalSubmatrixInterlacing) {
  SeededRng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.below(18);
    const auto x = oracle::random_cluster(rng, n, 3, 0.9 + 0.1 * n, 0.25);
    const Eigen::MatrixXd m = oracle::dense(assemble_x(x));
    const Eigen::VectorXd ev = oracle::eigenvalues(m);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      if (rng.uniform() < 0.5) keep.push_back(k);
    }
    if (keep.empty()) continue;
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j) sub(i, j) = m(keep[i], keep[j]);
    const Eigen::VectorXd es = oracle::eigenvalues(sub);
    EXPECT_GE(es.minCoeff(), ev.minCoeff() - 1e-10);
    EXPECT_LE(es.maxCoeff(), ev.maxCoeff() + 1e-10);
  }
}

TEST(JacobianForceProduct, PostDivisionMagnitude) {
  const std::vector<double> x = {-0.15, 0, 0, 0.15, 0, 0};
  const auto f = force_x(x);
  const auto af = jacobian_force_product(assemble_x(x), f);
  EXPECT_NEAR(std::abs(af[0]), 2 * 17.784 * 5.7456, 1e-9);
  EXPECT_NEAR(af[0], -af[3], 1e-12);
  EXPECT_NEAR(2 * 17.784 * 5.7456, 204.36, 0.01);
}

TEST(JacobianForceProduct, ZeroForce) {
  const std::vector<double> x = {0, 0, 0, 1, 0, 0};
  const std::vector<double> f(6, 0.0);
  for (double c : jacobian_force_product(assemble_x(x), f)) EXPECT_EQ(c, 0.0);
}

TEST(JacobianForceProduct, DimensionMismatch) {
  const BlockJacobian a = assemble_x({0, 0, 0, 0.3, 0, 0});
  EXPECT_THROW(a.apply(std::vector<double>(5)), std::invalid_argument);
}

TEST(FdJacobianForceProduct, ExactForLinearFields) {
  const ForceEvaluator lin = [](std::span<const double> y, std::span<double> out) {
    out[0] = 2 * y[0] - y[1] + 0.5;
    out[1] = -y[0] + 3 * y[1];
  };
  const std::vector<double> x = {0.3, -0.7};
  std::vector<double> f(2);
  lin(x, f);
  const auto af = fd_jacobian_force_product(lin, x, f, 1e-4);
  EXPECT_NEAR(af[0], 2 * f[0] - f[1], 1e-10);
  EXPECT_NEAR(af[1], -f[0] + 3 * f[1], 1e-10);
}

TEST(FdJacobianForceProduct, CloseToExactProduct) {
  CellForceModel model(kLaw, 3);
  const ForceEvaluator fe = [&](std::span<const double> y, std::span<double> out) {
    model.force(y, out);
  };
  const std::vector<double> x = {-0.15, 0, 0, 0.15, 0, 0};
  const auto f = force_x(x);
  const auto fd = fd_jacobian_force_product(fe, x, f);
  const auto ex = jacobian_force_product(assemble_x(x), f);
  EXPECT_NEAR(fd[0], ex[0], 0.01 * std::abs(ex[0]));

  SeededRng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto y = oracle::random_cluster(rng, 15, 3, 2.2, 0.7);
    const auto fy = force_x(y);
    const auto a = fd_jacobian_force_product(fe, y, fy);
    const auto b = jacobian_force_product(assemble_x(y), fy);
    double na = 0, nb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      na = std::max(na, std::abs(a[k] - b[k]));
      nb = std::max(nb, std::abs(b[k]));
    }
    EXPECT_LT(na, 1e-3 * nb);
  }
  const std::vector<double> rest = {0, 0, 0, 1, 0, 0};
  const std::vector<double> zero(6, 0.0);
  for (double c : fd_jacobian_force_product(fe, rest, zero)) EXPECT_EQ(c, 0.0);
  EXPECT_THROW(fd_jacobian_force_product(fe, x, f, 0.0), std::invalid_argument);
}

TEST(BlockJacobian, DenseLimit) {
  const CellPopulation big = hcp_spheroid(5);
  const BlockJacobian a = assemble(big, kLaw, build_neighbor_list(big, 1.5));
  EXPECT_THROW(a.to_dense(), std::length_error);
}

}  // namespace
}  // namespace cbm
