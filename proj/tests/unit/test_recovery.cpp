#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "errc.hpp"
#include "eulercs/construct.hpp"
#include "eulercs/props.hpp"
#include "eulercs/random.hpp"
#include "eulercs/recovery.hpp"

using namespace eulercs;

namespace {

const Eigen::MatrixXd& euler_55x121() {
  static const Eigen::MatrixXd phi = normalize(build_binary_matrix(euler_square(11, 5)));
  return phi;
}

}  // namespace

TEST(Rng, ReproducibleAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(c.below(13), 13u);
  }
  EXPECT_NE(substream_seed(1, 0), substream_seed(1, 1));
  EXPECT_NE(substream_seed(1, 0), substream_seed(2, 0));
  EXPECT_EQ(substream_seed(9, 4), substream_seed(9, 4));
}

TEST(Rng, NormalMoments) {
  Rng r(123);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(SparseSignal, GeneratedSupportIsSortedAndDistinct) {
  const SparseSignal s = gen_sparse_signal(121, 9, 77);
  EXPECT_EQ(s.dimension, 121u);
  ASSERT_EQ(s.support.size(), 9u);
  ASSERT_EQ(s.values.size(), 9u);
  EXPECT_TRUE(std::is_sorted(s.support.begin(), s.support.end()));
  EXPECT_EQ(std::set<std::size_t>(s.support.begin(), s.support.end()).size(), 9u);
  EXPECT_LT(s.support.back(), 121u);
  const Eigen::VectorXd d = s.dense();
  EXPECT_EQ((d.array() != 0.0).count(), 9);
  const SparseSignal again = gen_sparse_signal(121, 9, 77);
  EXPECT_EQ(again.support, s.support);
  EXPECT_EQ(again.values, s.values);
  EXPECT_EQ(errc_of([] { (void)gen_sparse_signal(10, 11, 1); }), Errc::InvalidSparsity);
  EXPECT_EQ(errc_of([] { (void)gen_sparse_signal(10, 0, 1); }), Errc::InvalidSparsity);
}

TEST(RandomMatrices, EntryDistributions) {
  const Eigen::MatrixXd b = gen_bernoulli_matrix(16, 200, 3);
  const double v = 1.0 / std::sqrt(16.0);
  EXPECT_TRUE(((b.array() == v) || (b.array() == -v)).all());
  EXPECT_NEAR(b.mean(), 0.0, 0.02);
  const Eigen::MatrixXd g = gen_gaussian_matrix(50, 400, 3);
  EXPECT_NEAR(g.array().square().mean(), 1.0 / 50.0, 0.002);
  EXPECT_EQ(gen_gaussian_matrix(5, 5, 9), gen_gaussian_matrix(5, 5, 9));
  EXPECT_NE(gen_gaussian_matrix(5, 5, 9), gen_gaussian_matrix(5, 5, 10));
}

TEST(Snr, Formula) {
  Eigen::VectorXd x(2), e(2);
  x << 1.0, 0.0;
  e << 0.9, 0.0;
  EXPECT_NEAR(snr(x, e), 10.0, 1e-12);  // 10 log10(1 / 0.1)
  EXPECT_NEAR(snr(x, Eigen::VectorXd::Zero(2)), 0.0, 1e-15);
  EXPECT_EQ(snr(x, x), std::numeric_limits<double>::infinity());
  EXPECT_EQ(capped_snr(snr(x, x)), kSnrCapDb);
  EXPECT_EQ(capped_snr(42.0), 42.0);
  EXPECT_EQ(errc_of([] { (void)snr(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3)); }), Errc::UndefinedSNR);
}

TEST(Omp, RecoversWithinGuarantee) {
  const Eigen::MatrixXd& phi = euler_55x121();
  const OmpSolver solver(phi);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SparseSignal s = gen_sparse_signal(121, 2, seed);
    const Eigen::VectorXd y = phi * s.dense();
    const RecoveryResult r = solver.solve(y, 2, 1e-12 * y.norm());
    EXPECT_EQ(r.support, s.support) << seed;
    EXPECT_GE(snr(s.dense(), r.estimate), kSuccessThresholdDb) << seed;
    EXPECT_FALSE(r.rank_deficient);
  }
}

TEST(Omp, StopsEarlyOnSmallResidual) {
  const Eigen::MatrixXd& phi = euler_55x121();
  const SparseSignal s = gen_sparse_signal(121, 1, 4);
  const Eigen::VectorXd y = phi * s.dense();
  const RecoveryResult r = omp(phi, y, 10, 1e-12 * y.norm());
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(r.support, s.support);
  const RecoveryResult zero = omp(phi, Eigen::VectorXd::Zero(55), 5, 0.0);
  EXPECT_EQ(zero.iterations, 0u);
  EXPECT_TRUE(zero.estimate.isZero());
}

TEST(Omp, TiesGoToLowestIndex) {
  Eigen::MatrixXd phi(2, 3);
  phi << 1, 0, 1,
         0, 1, 0;
  Eigen::VectorXd y(2);
  y << 2, 0;
  const RecoveryResult r = omp(phi, y, 1, 0.0);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], 0u);
  EXPECT_DOUBLE_EQ(r.estimate(0), 2.0);
}

TEST(Omp, NormalizesColumnsForSelection) {
  Eigen::MatrixXd phi(2, 2);
  phi << 10, 0.6,
         0, 0.8;
  Eigen::VectorXd y(2);
  y << 0.6, 0.8;
  const RecoveryResult r = omp(phi, y, 1, 0.0);
  EXPECT_EQ(r.support, std::vector<std::size_t>{1});
}

TEST(Omp, FlagsRankDeficientSelection) {
  Eigen::MatrixXd phi(3, 3);
  phi << 1, 0, 1,
         0, 1, 0,
         0, 0, 1e-14;
  Eigen::VectorXd y(3);
  y << 1, 0, 1;
  const RecoveryResult r = omp(phi, y, 3, 0.0);
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_EQ(r.support, (std::vector<std::size_t>{0, 2}));
  EXPECT_NEAR(r.residual_norm, 1.0, 1e-9);
}

TEST(Omp, InputErrors) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(3, 4);
  EXPECT_EQ(errc_of([&] { (void)OmpSolver(phi); }), Errc::DegenerateColumn);
  const Eigen::MatrixXd& good = euler_55x121();
  EXPECT_EQ(errc_of([&] { (void)omp(good, Eigen::VectorXd::Ones(54), 2, 0.0); }), Errc::ShapeError);
  EXPECT_EQ(errc_of([&] { (void)omp(good, Eigen::VectorXd::Ones(55), 56, 0.0); }), Errc::InvalidInput);
}

TEST(BasisPursuit, RecoversWithinGuarantee) {
  const Eigen::MatrixXd& phi = euler_55x121();
  const BasisPursuitSolver solver(phi);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SparseSignal s = gen_sparse_signal(121, 2, 1000 + seed);
    const Eigen::VectorXd y = phi * s.dense();
    const RecoveryResult r = solver.solve(y);
    EXPECT_GE(snr(s.dense(), r.estimate), kSuccessThresholdDb) << seed;
    EXPECT_LE(r.residual_norm, 1e-10 * std::max(1.0, y.norm()));
  }
}

TEST(BasisPursuit, MinimumL1OnTinyProblem) {
  // x1 + 2 x2 = 2: the l1 minimiser is (0, 1).
  Eigen::MatrixXd phi(1, 2);
  phi << 1, 2;
  Eigen::VectorXd y(1);
  y << 2;
  const RecoveryResult r = basis_pursuit(phi, y);
  EXPECT_NEAR(r.estimate(0), 0.0, 1e-9);
  EXPECT_NEAR(r.estimate(1), 1.0, 1e-9);
}

TEST(BasisPursuit, ZeroMeasurementAndFailure) {
  const Eigen::MatrixXd& phi = euler_55x121();
  EXPECT_TRUE(basis_pursuit(phi, Eigen::VectorXd::Zero(55)).estimate.isZero());
  BasisPursuitParams p;
  p.max_iter = 1;
  const SparseSignal s = gen_sparse_signal(121, 8, 3);
  try {
    (void)basis_pursuit(phi, phi * s.dense(), p);
    FAIL() << "expected ConvergenceFailure";
  } catch (const ConvergenceFailure& e) {
    EXPECT_EQ(e.code(), Errc::ConvergenceFailure);
    EXPECT_EQ(e.best_iterate().size(), 121);
    EXPECT_EQ(e.iterations(), 1u);
  }
}
