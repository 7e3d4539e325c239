#include "eulercs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eulercs/random.hpp"

namespace eulercs {

Eigen::VectorXd SparseSignal::dense() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension));
  for (std::size_t t = 0; t < support.size(); ++t) x(static_cast<Eigen::Index>(support[t])) = values[t];
  return x;
}

namespace {

std::vector<std::size_t> support_of(const Eigen::VectorXd& x) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  // same relative cut as the rank test in omp
  cod.setThreshold(1e-12);
  cod.compute(a);
  return cod.solve(b);
}

}  // namespace

OmpSolver::OmpSolver(Eigen::MatrixXd dictionary) : phi_(std::move(dictionary)) {
  inv_norms_.resize(phi_.cols());
  for (Eigen::Index j = 0; j < phi_.cols(); ++j) {
    const double norm = phi_.col(j).norm();
    if (norm == 0.0) throw Error(Errc::DegenerateColumn, "column " + std::to_string(j + 1) + " is zero");
    inv_norms_(j) = 1.0 / norm;
  }
}

RecoveryResult OmpSolver::solve(const Eigen::VectorXd& y, std::size_t max_atoms, double tol) const {
  const Eigen::Index m = phi_.rows();
  const Eigen::Index cols = phi_.cols();
  if (y.size() != m) {
    throw Error(Errc::ShapeError, "measurement length " + std::to_string(y.size()) + " != rows " +
                                      std::to_string(m));
  }
  if (max_atoms > static_cast<std::size_t>(m)) {
    throw Error(Errc::InvalidInput, "max_atoms " + std::to_string(max_atoms) + " exceeds rows " +
                                        std::to_string(m));
  }

  const auto cap = static_cast<Eigen::Index>(max_atoms);
  Eigen::MatrixXd q(m, cap);
  Eigen::MatrixXd r_factor = Eigen::MatrixXd::Zero(cap, cap);
  Eigen::VectorXd qty(cap);
  std::vector<Eigen::Index> selected;
  std::vector<char> in_support(static_cast<std::size_t>(cols), 0);
  Eigen::VectorXd residual = y;
  RecoveryResult result;

  while (static_cast<Eigen::Index>(selected.size()) < cap && residual.norm() > tol) {
    const Eigen::VectorXd corr = phi_.transpose() * residual;
    Eigen::Index best = -1;
    double best_value = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (in_support[static_cast<std::size_t>(j)]) continue;
      const double v = std::abs(corr(j)) * inv_norms_(j);
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    if (best < 0) break;
    ++result.iterations;

    const Eigen::Index s = static_cast<Eigen::Index>(selected.size());
    const auto a = phi_.col(best);
    Eigen::VectorXd coeffs = q.leftCols(s).transpose() * a;
    Eigen::VectorXd v = a - q.leftCols(s) * coeffs;
    const Eigen::VectorXd again = q.leftCols(s).transpose() * v;
    v -= q.leftCols(s) * again;
    coeffs += again;
    const double vnorm = v.norm();

    selected.push_back(best);
    in_support[static_cast<std::size_t>(best)] = 1;
    if (vnorm <= 1e-12 * a.norm()) {
      result.rank_deficient = true;
      break;
    }
    q.col(s) = v / vnorm;
    r_factor.block(0, s, s, 1) = coeffs;
    r_factor(s, s) = vnorm;
    qty(s) = q.col(s).dot(residual);
    residual -= q.col(s) * qty(s);
  }

  result.estimate = Eigen::VectorXd::Zero(cols);
  if (!selected.empty()) {
    const auto s = static_cast<Eigen::Index>(selected.size());
    Eigen::VectorXd coef;
    if (result.rank_deficient) {
      Eigen::MatrixXd sub(m, s);
      for (Eigen::Index t = 0; t < s; ++t) sub.col(t) = phi_.col(selected[static_cast<std::size_t>(t)]);
      coef = min_norm_least_squares(sub, y);
    } else {
      // Recompute Q^T y against the original measurement for accuracy.
      const Eigen::VectorXd rhs = q.leftCols(s).transpose() * y;
      coef = r_factor.topLeftCorner(s, s).triangularView<Eigen::Upper>().solve(rhs);
    }
    for (Eigen::Index t = 0; t < s; ++t) result.estimate(selected[static_cast<std::size_t>(t)]) = coef(t);
  }
  for (Eigen::Index j : selected) result.support.push_back(static_cast<std::size_t>(j));
  std::sort(result.support.begin(), result.support.end());
  result.residual_norm = (y - phi_ * result.estimate).norm();
  return result;
}

RecoveryResult omp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, std::size_t max_atoms,
                   double tol) {
  return OmpSolver(phi).solve(y, max_atoms, tol);
}

BasisPursuitSolver::BasisPursuitSolver(Eigen::MatrixXd dictionary, BasisPursuitParams params)
    : phi_(std::move(dictionary)), params_(params) {
  if (!(params_.rho > 0.0)) throw Error(Errc::InvalidInput, "rho must be positive");
  const Eigen::MatrixXd gram = phi_ * phi_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = (lambda.size() ? lambda.maxCoeff() : 0.0) * 1e-12;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) inv(i) = 1.0 / lambda(i);
  }
  gram_pinv_ = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXd BasisPursuitSolver::project(const Eigen::VectorXd& v, const Eigen::VectorXd& y) const {
  return v - phi_.transpose() * (gram_pinv_ * (phi_ * v - y));
}

RecoveryResult BasisPursuitSolver::solve(const Eigen::VectorXd& y) const {
  const Eigen::Index m = phi_.rows();
  const Eigen::Index cols = phi_.cols();
  if (y.size() != m) {
    throw Error(Errc::ShapeError, "measurement length " + std::to_string(y.size()) + " != rows " +
                                      std::to_string(m));
  }
  const double ynorm = y.norm();
  const double feas_tol = params_.tol_feas * std::max(1.0, ynorm);
  RecoveryResult result;
  if (ynorm == 0.0) {
    result.estimate = Eigen::VectorXd::Zero(cols);
    return result;
  }

  const double rho = params_.rho;
  const double kappa = 1.0 / rho;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(cols);
  bool converged = false;
  std::size_t it = 0;
  while (it < params_.max_iter) {
    ++it;
    x = project(z - u, y);
    const Eigen::VectorXd z_old = z;
    const Eigen::VectorXd w = x + u;
    z = w.unaryExpr([kappa](double t) {
      return t > kappa ? t - kappa : (t < -kappa ? t + kappa : 0.0);
    });
    u += x - z;
    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    if (primal <= params_.tol_gap * std::max({1.0, x.norm(), z.norm()}) &&
        dual <= params_.tol_gap * std::max(1.0, rho * u.norm())) {
      converged = true;
      break;
    }
  }
  result.iterations = it;
  if (!converged) {
    throw ConvergenceFailure("basis pursuit did not converge in " + std::to_string(it) + " iterations",
                             x, it);
  }

  Eigen::VectorXd best = x;
  const std::vector<std::size_t> supp = support_of(z);
  if (!supp.empty() && supp.size() <= static_cast<std::size_t>(m)) {
    Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(supp.size()));
    for (std::size_t t = 0; t < supp.size(); ++t) {
      sub.col(static_cast<Eigen::Index>(t)) = phi_.col(static_cast<Eigen::Index>(supp[t]));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() == sub.cols()) {
      const Eigen::VectorXd coef = qr.solve(y);
      Eigen::VectorXd polished = Eigen::VectorXd::Zero(cols);
      for (std::size_t t = 0; t < supp.size(); ++t) {
        polished(static_cast<Eigen::Index>(supp[t])) = coef(static_cast<Eigen::Index>(t));
      }
      const double l1_gap = params_.tol_gap * std::max(1.0, x.lpNorm<1>());
      if ((phi_ * polished - y).norm() <= feas_tol &&
          polished.lpNorm<1>() <= x.lpNorm<1>() + l1_gap) {
        best = polished;
      }
    }
  }
  result.residual_norm = (phi_ * best - y).norm();
  if (result.residual_norm > feas_tol) {
    throw ConvergenceFailure("basis pursuit iterate violates feasibility tolerance (residual " +
                                 std::to_string(result.residual_norm) + ")",
                             best, it);
  }
  result.estimate = best;
  result.support = support_of(best);
  return result;
}

RecoveryResult basis_pursuit(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                             const BasisPursuitParams& params) {
  return BasisPursuitSolver(phi, params).solve(y);
}

SparseSignal gen_sparse_signal(std::size_t dimension, std::size_t sparsity, std::uint64_t seed) {
  if (sparsity < 1 || sparsity > dimension) {
    throw Error(Errc::InvalidSparsity, "sparsity " + std::to_string(sparsity) + " not in 1.." +
                                           std::to_string(dimension));
  }
  Rng rng(seed);
  std::vector<std::size_t> pool(dimension);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `sparsity` slots are a uniform subset.
  for (std::size_t t = 0; t < sparsity; ++t) {
    const std::size_t pick = t + static_cast<std::size_t>(rng.below(dimension - t));
    std::swap(pool[t], pool[pick]);
  }
  SparseSignal signal;
  signal.dimension = dimension;
  signal.seed = seed;
  signal.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(sparsity));
  std::sort(signal.support.begin(), signal.support.end());
  signal.values.resize(sparsity);
  for (double& v : signal.values) v = rng.normal();
  return signal;
}

Eigen::MatrixXd gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw Error(Errc::ShapeError, "matrix dimensions must be positive");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = rng.normal() * scale;
  }
  return out;
}

Eigen::MatrixXd gen_bernoulli_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw Error(Errc::ShapeError, "matrix dimensions must be positive");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = (rng.next_u64() >> 63) ? scale : -scale;
  }
  return out;
}

double snr(const Eigen::VectorXd& x, const Eigen::VectorXd& estimate) {
  if (x.size() != estimate.size()) throw Error(Errc::ShapeError, "SNR operands differ in length");
  const double signal = x.norm();
  if (signal == 0.0) throw Error(Errc::UndefinedSNR, "SNR of the zero signal is undefined");
  const double error = (x - estimate).norm();
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double capped_snr(double snr_db) noexcept { return std::min(snr_db, kSnrCapDb); }

}  // namespace eulercs
