#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "eulercs/error.hpp"

namespace eulercs {

struct SparseSignal {
  std::size_t dimension = 0;
  std::vector<std::size_t> support;  // 0-based, ascending
  std::vector<double> values;        // aligned with support
  std::uint64_t seed = 0;

  Eigen::VectorXd dense() const;
};

struct RecoveryResult {
  Eigen::VectorXd estimate;
  std::vector<std::size_t> support;  // 0-based, ascending
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  double snr_db = std::numeric_limits<double>::quiet_NaN();  // filled when ground truth is known
  bool rank_deficient = false;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, Eigen::VectorXd best, std::size_t iterations)
      : Error(Errc::ConvergenceFailure, what), best_(std::move(best)), iterations_(iterations) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  Eigen::VectorXd best_;
  std::size_t iterations_;
};

/// Orthogonal matching pursuit over a fixed dictionary.
///
/// Each step picks the column maximising |<phi_j, r>| / |phi_j| (ties to the
/// lowest index), then refits all selected coefficients by least squares via
/// an incrementally updated QR factorisation. Stops after `max_atoms`
/// selections or once |r| <= tol.
class OmpSolver {
 public:
  explicit OmpSolver(Eigen::MatrixXd dictionary);

  RecoveryResult solve(const Eigen::VectorXd& y, std::size_t max_atoms, double tol) const;

  const Eigen::MatrixXd& dictionary() const noexcept { return phi_; }

 private:
  Eigen::MatrixXd phi_;
  Eigen::VectorXd inv_norms_;
};

RecoveryResult omp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, std::size_t max_atoms,
                   double tol);

struct BasisPursuitParams {
  double rho = 1.0;
  std::size_t max_iter = 5000;
  double tol_feas = 1e-10;
  double tol_gap = 1e-8;
};

/// min |x|_1 subject to phi x = y by ADMM.
///
/// Alternates projection onto {x : phi x = y}, using a cached pseudo-inverse
/// of phi phi^T, with elementwise soft-thresholding at 1/rho. On convergence
/// the iterate is polished by least squares on its support, and the polished
/// point is kept only if it stays feasible and no larger in l1 norm.
class BasisPursuitSolver {
 public:
  explicit BasisPursuitSolver(Eigen::MatrixXd dictionary, BasisPursuitParams params = {});

  RecoveryResult solve(const Eigen::VectorXd& y) const;

  const BasisPursuitParams& params() const noexcept { return params_; }

 private:
  Eigen::VectorXd project(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const;

  Eigen::MatrixXd phi_;
  Eigen::MatrixXd gram_pinv_;
  BasisPursuitParams params_;
};

RecoveryResult basis_pursuit(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                             const BasisPursuitParams& params = {});

SparseSignal gen_sparse_signal(std::size_t dimension, std::size_t sparsity, std::uint64_t seed);

// Entries N(0, 1/m), filled column by column.
Eigen::MatrixXd gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
// Entries +-1/sqrt(m) with probability 1/2 each, filled column by column.
Eigen::MatrixXd gen_bernoulli_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

inline constexpr double kSnrCapDb = 310.0;
inline constexpr double kSuccessThresholdDb = 100.0;

// 10 log10(|x| / |x - estimate|) in dB: a ratio of norms, not of energies.
// +infinity for exact recovery; throws UndefinedSNR when x = 0.
double snr(const Eigen::VectorXd& x, const Eigen::VectorXd& estimate);

// snr clamped to kSnrCapDb for serialisation.
double capped_snr(double snr_db) noexcept;

}  // namespace eulercs
