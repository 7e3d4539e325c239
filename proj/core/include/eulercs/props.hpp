#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "eulercs/sensing_matrix.hpp"

namespace eulercs {

struct CoherenceReport {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  // Largest |<a_i, a_j>| / (|a_i| |a_j|) over i < j.
  double coherence = 0.0;
  // Lexicographically first pair attaining the maximum (0-based).
  std::uint32_t col_a = 0;
  std::uint32_t col_b = 0;
  // Integer data of the maximising pair: |<a_i, a_j>| and w_i * w_j for
  // supports of sizes w_i, w_j. coherence == overlap / sqrt(weight_product).
  std::int64_t max_overlap = 0;
  std::int64_t weight_product = 0;
  double welch = std::numeric_limits<double>::quiet_NaN();  // NaN unless cols > rows
  double density = 0.0;
  std::map<std::uint32_t, std::uint64_t> weight_histogram;
};

// Exhaustive over all column pairs. Pairs sharing no row have zero inner
// product, so only pairs reached through a common row are accumulated.
CoherenceReport coherence(const SensingMatrix& matrix);

// Dense variant for real-valued matrices (random baselines).
double coherence(const Eigen::MatrixXd& matrix);

// key=value lines.
void write_report(std::ostream& out, const CoherenceReport& report);

double welch_bound(std::uint64_t rows, std::uint64_t cols);

// floor(C(m, r) / C(k, r)) in exact integer arithmetic.
std::uint64_t max_binary_columns(std::uint64_t m, std::uint64_t k, std::uint64_t r);

double rip_delta(double coherence, std::uint64_t order);

inline constexpr std::uint64_t kUnboundedSparsity = std::numeric_limits<std::uint64_t>::max();

// Largest integer s with s < (1 + 1/mu) / 2; kUnboundedSparsity for mu = 0.
std::uint64_t sparsity_guarantee(double coherence);

// c = M / (m * mu)^2 from the measured coherence. Requires an Euler-family
// provenance ("euler", "rows", "extended").
double aspect_constant(const SensingMatrix& matrix);
double aspect_constant(const SensingMatrix& matrix, const CoherenceReport& report);

}  // namespace eulercs
