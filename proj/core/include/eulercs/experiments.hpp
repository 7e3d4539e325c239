#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "eulercs/imaging.hpp"
#include "eulercs/recovery.hpp"
#include "eulercs/sensing_matrix.hpp"

namespace eulercs {

enum class MatrixFamily { Euler, RowSize, Gaussian, Bernoulli };

std::string_view family_name(MatrixFamily f) noexcept;
MatrixFamily parse_family(std::string_view name);

struct MatrixSource {
  MatrixFamily family = MatrixFamily::Euler;
  std::uint32_t order = 0;   // Euler index n
  std::uint32_t degree = 0;  // Euler index k
  std::uint32_t rows = 0;    // row-size family, random families
  std::uint32_t cols = 0;    // random families
  std::uint64_t seed = 0;    // random families

  static MatrixSource euler(std::uint32_t n, std::uint32_t k);
  static MatrixSource row_size(std::uint32_t m);
  static MatrixSource gaussian(std::uint32_t m, std::uint32_t cols, std::uint64_t seed);
  static MatrixSource bernoulli(std::uint32_t m, std::uint32_t cols, std::uint64_t seed);

  nlohmann::ordered_json describe() const;
};

struct BuiltMatrix {
  Eigen::MatrixXd dictionary;            // unit-norm columns for the deterministic families
  std::optional<SensingMatrix> sparse;   // set for the deterministic families
};

BuiltMatrix build_matrix(const MatrixSource& source);

enum class Solver { Omp, BasisPursuit };

std::string_view solver_name(Solver s) noexcept;
Solver parse_solver(std::string_view name);

// Solves y = phi x for a `sparsity`-sparse x. OMP selects at most `sparsity`
// atoms and stops early once the residual drops to 1e-12 |y|.
RecoveryResult run_solver(Solver solver, const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                          std::size_t sparsity);

struct SweepConfig {
  MatrixSource source;
  std::size_t k_min = 1;
  std::size_t k_max = 1;
  std::size_t trials = 1000;
  double threshold_db = kSuccessThresholdDb;
  Solver solver = Solver::Omp;
  std::uint64_t seed = 0;
};

struct SweepPoint {
  std::size_t sparsity = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double percent = 0.0;
};

struct PhaseConfig {
  MatrixFamily family = MatrixFamily::Euler;
  std::uint32_t cols = 121;
  std::vector<std::uint32_t> rows;
  double fraction = 0.9;
  std::size_t trials = 1000;
  double threshold_db = kSuccessThresholdDb;
  Solver solver = Solver::Omp;
  std::uint64_t seed = 0;
};

struct PhasePoint {
  std::uint32_t rows = 0;
  std::size_t largest_k = 0;
  std::size_t successes = 0;  // at largest_k; 0 when largest_k == 0
  double delta = 0.0;         // m / M
  double rho = 0.0;           // k / M
};

struct ReconConfig {
  MatrixSource source;
  std::size_t edge = 16;
  std::size_t levels = 0;     // 0 selects the full depth
  std::size_t max_atoms = 0;  // 0 selects rows / 4
  Solver solver = Solver::Omp;
};

struct ReconPoint {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double factor = 0.0;  // M / m
  double snr_db = 0.0;
  std::size_t patches = 0;
  std::size_t failed_patches = 0;  // solver gave up; patch left at its best iterate
};

struct ExperimentReport {
  static constexpr int kFormatVersion = 1;

  std::string kind;  // "sweep", "phase" or "recon"
  nlohmann::ordered_json config;
  std::vector<SweepPoint> sweep;
  std::vector<PhasePoint> phase;
  std::vector<ReconPoint> recon;
  double wall_clock_s = 0.0;
};

ExperimentReport run_sweep(const SweepConfig& cfg);
ExperimentReport run_phase_transition(const PhaseConfig& cfg);

struct ReconOutcome {
  Image image;
  ExperimentReport report;
};

ReconOutcome run_patch_reconstruction(const Image& image, const ReconConfig& cfg);

// Matrix with edge^2 columns and `rows` rows for patch experiments: the Euler
// index (edge, rows / edge) when it exists, else the first edge^2 columns of
// build_for_row_size(rows).
MatrixSource recon_source_for_rows(std::uint32_t rows, std::size_t edge);

}  // namespace eulercs
