#include <cmath>

#include <gtest/gtest.h>

#include "errc.hpp"
#include "eulercs/experiments.hpp"
#include "eulercs/props.hpp"
#include "eulercs/random.hpp"

using namespace eulercs;

namespace {

// Every patch is the inverse transform of an s-sparse coefficient vector.
Image haar_sparse_image(std::size_t h, std::size_t w, std::size_t edge, std::size_t s, std::uint64_t seed) {
  PatchSet set;
  set.grid = PatchGrid{h, w, edge};
  const std::size_t levels = haar_max_levels(edge);
  for (std::size_t i = 0; i < set.grid.count(); ++i) {
    const SparseSignal sig = gen_sparse_signal(edge * edge, s, substream_seed(seed, i));
    const Eigen::VectorXd coeffs = sig.dense() * 100.0;
    set.patches.push_back(haar_inverse({coeffs.data(), static_cast<std::size_t>(coeffs.size())}, edge, levels));
  }
  return unpatchify(set);
}

}  // namespace

TEST(Sources, BuildAndDescribe) {
  const BuiltMatrix e = build_matrix(MatrixSource::euler(11, 5));
  EXPECT_EQ(e.dictionary.rows(), 55);
  EXPECT_EQ(e.dictionary.cols(), 121);
  ASSERT_TRUE(e.sparse.has_value());
  EXPECT_NEAR(e.dictionary.col(7).norm(), 1.0, 1e-15);
  const BuiltMatrix g = build_matrix(MatrixSource::gaussian(20, 40, 3));
  EXPECT_FALSE(g.sparse.has_value());
  EXPECT_EQ(g.dictionary, build_matrix(MatrixSource::gaussian(20, 40, 3)).dictionary);
  EXPECT_EQ(MatrixSource::euler(11, 5).describe().dump(), R"({"family":"euler","n":11,"k":5})");
  EXPECT_EQ(parse_family("rows"), MatrixFamily::RowSize);
  EXPECT_EQ(errc_of([] { (void)parse_family("hadamard"); }), Errc::InvalidInput);
  EXPECT_EQ(parse_solver("basis_pursuit"), Solver::BasisPursuit);
  EXPECT_EQ(solver_name(Solver::Omp), "omp");
}

TEST(Sweep, PerfectWithinGuaranteeAndDeterministic) {
  SweepConfig cfg;
  cfg.source = MatrixSource::euler(11, 5);
  cfg.k_min = 1;
  cfg.k_max = 12;
  cfg.trials = 60;
  cfg.seed = 11;
  const ExperimentReport a = run_sweep(cfg);
  ASSERT_EQ(a.kind, "sweep");
  ASSERT_EQ(a.sweep.size(), 12u);
  const std::size_t guarantee = sparsity_guarantee(0.2);
  for (const SweepPoint& p : a.sweep) {
    EXPECT_EQ(p.trials, 60u);
    EXPECT_DOUBLE_EQ(p.percent, 100.0 * static_cast<double>(p.successes) / 60.0);
    if (p.sparsity <= guarantee) EXPECT_EQ(p.successes, 60u) << p.sparsity;
  }
  const ExperimentReport b = run_sweep(cfg);
  for (std::size_t i = 0; i < a.sweep.size(); ++i) EXPECT_EQ(a.sweep[i].successes, b.sweep[i].successes);
}

TEST(Sweep, TrendFallsWithSparsity) {
  SweepConfig cfg;
  cfg.source = MatrixSource::euler(11, 5);
  cfg.k_min = 10;
  cfg.k_max = 30;
  cfg.trials = 80;
  cfg.seed = 2;
  const ExperimentReport r = run_sweep(cfg);
  EXPECT_GT(r.sweep.front().percent, r.sweep.back().percent);
  std::size_t inversions = 0;
  for (std::size_t i = 1; i < r.sweep.size(); ++i) {
    const double rise = r.sweep[i].percent - r.sweep[i - 1].percent;
    if (rise > 0) {
      ++inversions;
      EXPECT_LE(rise, 5.0) << r.sweep[i].sparsity;
    }
  }
  EXPECT_LE(inversions, 4u);
}

TEST(Sweep, BasisPursuitAgreesOnEasyCases) {
  SweepConfig cfg;
  cfg.source = MatrixSource::euler(11, 5);
  cfg.k_max = 2;
  cfg.trials = 10;
  cfg.solver = Solver::BasisPursuit;
  const ExperimentReport r = run_sweep(cfg);
  for (const SweepPoint& p : r.sweep) EXPECT_EQ(p.successes, 10u);
}

TEST(Sweep, RejectsBadConfig) {
  SweepConfig cfg;
  cfg.source = MatrixSource::euler(3, 2);
  cfg.k_max = 7;
  EXPECT_EQ(errc_of([&] { (void)run_sweep(cfg); }), Errc::InvalidSparsity);
  cfg.k_max = 1;
  cfg.trials = 0;
  EXPECT_EQ(errc_of([&] { (void)run_sweep(cfg); }), Errc::InvalidInput);
}

TEST(Phase, LargestSparsityGrowsWithRows) {
  PhaseConfig cfg;
  cfg.rows = {22, 55, 88};
  cfg.trials = 40;
  cfg.seed = 4;
  const ExperimentReport r = run_phase_transition(cfg);
  ASSERT_EQ(r.phase.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(r.phase[i].delta, cfg.rows[i] / 121.0);
    EXPECT_DOUBLE_EQ(r.phase[i].rho, static_cast<double>(r.phase[i].largest_k) / 121.0);
    if (i > 0) EXPECT_GE(r.phase[i].largest_k, r.phase[i - 1].largest_k);
  }
  EXPECT_GE(r.phase[1].largest_k, 2u);
  const ExperimentReport again = run_phase_transition(cfg);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again.phase[i].largest_k, r.phase[i].largest_k);
}

TEST(Phase, RejectsUnbuildableRows) {
  PhaseConfig cfg;
  cfg.rows = {50};
  cfg.trials = 5;
  EXPECT_EQ(errc_of([&] { (void)run_phase_transition(cfg); }), Errc::IndexNotConstructible);
}

TEST(Recon, HaarSparseImagesComeBackExactly) {
  const Image img = haar_sparse_image(64, 48, 16, 4, 9);
  ReconConfig cfg;
  cfg.source = MatrixSource::euler(16, 8);
  cfg.edge = 16;
  const ReconOutcome out = run_patch_reconstruction(img, cfg);
  ASSERT_EQ(out.report.recon.size(), 1u);
  const ReconPoint& p = out.report.recon[0];
  EXPECT_EQ(p.rows, 128u);
  EXPECT_EQ(p.cols, 256u);
  EXPECT_DOUBLE_EQ(p.factor, 2.0);
  EXPECT_EQ(p.patches, 12u);
  EXPECT_EQ(p.failed_patches, 0u);
  EXPECT_GE(p.snr_db, kSuccessThresholdDb);
  EXPECT_EQ(out.image.width, 48u);
}

TEST(Recon, MatrixMustMatchPatch) {
  ReconConfig cfg;
  cfg.source = MatrixSource::euler(11, 5);
  cfg.edge = 16;
  EXPECT_EQ(errc_of([&] { (void)run_patch_reconstruction(Image(32, 32), cfg); }), Errc::ShapeError);
  cfg.source = MatrixSource::euler(16, 4);
  cfg.levels = 5;
  EXPECT_EQ(errc_of([&] { (void)run_patch_reconstruction(Image(32, 32), cfg); }), Errc::PatchSizeError);
}

TEST(Recon, SourceForRows) {
  const MatrixSource a = recon_source_for_rows(128, 16);
  EXPECT_EQ(a.family, MatrixFamily::Euler);
  EXPECT_EQ(a.order, 16u);
  EXPECT_EQ(a.degree, 8u);
  const MatrixSource b = recon_source_for_rows(100, 16);
  EXPECT_EQ(b.family, MatrixFamily::RowSize);
  EXPECT_EQ(b.cols, 256u);
  EXPECT_EQ(build_matrix(b).dictionary.cols(), 256);
  EXPECT_EQ(errc_of([] { (void)build_matrix(recon_source_for_rows(55, 16)); }), Errc::ShapeError);
}
