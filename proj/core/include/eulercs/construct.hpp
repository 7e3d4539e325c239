#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "eulercs/euler.hpp"
#include "eulercs/sensing_matrix.hpp"

namespace eulercs {

/// Binary nk x n^2 matrix of an Euler square of index (n, k).
///
/// Column c corresponds to the c-th cell in row-major order; its l-th one
/// sits at row (l-1)*n + a_l of the cell's k-tuple (1-based rows, so row
/// (l-1)*n + a_l + 1). Requires k >= 2 and n >= 3.
SensingMatrix build_binary_matrix(const EulerSquare& square);

// Inverse of build_binary_matrix: reads the k-tuple of each cell back from the
// row blocks. Throws ShapeError if a column does not have exactly one entry
// in each of the k row blocks of height n.
EulerSquare square_from_matrix(const SensingMatrix& matrix, std::uint32_t n, std::uint32_t k);

// Binary matrix with exactly `rows` rows and coherence sqrt(M)/rows, for any
// rows >= 6 that is neither prime nor the square of a prime. Prime powers
// p^i (i >= 3) use index (p^(i-1), p); otherwise the smallest prime-power
// component q gives index (rows/q, q).
SensingMatrix build_for_row_size(std::uint32_t rows);

struct ExtensionStage {
  std::uint32_t peeled = 0;  // prime-power component removed at this stage
  std::uint32_t order = 0;   // n_t = n_{t-1} / peeled
  std::uint64_t copies = 0;  // k^t
  std::uint64_t columns = 0; // n_t^2 * k^t
  std::vector<std::uint32_t> offsets;  // 0-based row offset of each copy
};

struct ExtensionPlan {
  std::uint32_t order = 0;
  std::uint32_t degree = 0;
  std::vector<ExtensionStage> stages;

  std::uint64_t total_columns() const;
};

// Pure planning step; no matrices are built.
ExtensionPlan plan_extension(std::uint32_t order);

struct ExtendedMatrix {
  SensingMatrix matrix;
  ExtensionPlan plan;
};

// [Phi0 Psi1 ... Psil]: the Euler matrix of index (n, minpp(n)-1) followed by
// zero-padded copies of the smaller Euler matrices obtained by peeling the
// largest prime-power component of n at each stage.
ExtendedMatrix build_extended(std::uint32_t order);

class HadamardMatrix {
 public:
  HadamardMatrix() = default;
  HadamardMatrix(std::uint32_t order, std::vector<std::int8_t> entries);

  std::uint32_t order() const noexcept { return order_; }
  std::int8_t at(std::uint32_t i, std::uint32_t j) const {
    return entries_[static_cast<std::size_t>(i) * order_ + j];
  }
  // H * H^T == order * I, checked exhaustively.
  bool is_valid() const;

 private:
  std::uint32_t order_ = 0;
  std::vector<std::int8_t> entries_;
};

// Sylvester (powers of two), Paley I (q + 1, q prime, q = 3 mod 4), and
// Sylvester doublings of Paley matrices.
HadamardMatrix build_hadamard(std::uint32_t order);

// Ternary matrix from the Euler square of index (p^i, p^i - j), j in {1, 2}.
// Every one of the binary matrix is replaced by a row of a Hadamard matrix of
// order k = p^i - j, or by the leading k x k block of one of order k + 1.
SensingMatrix build_ternary(std::uint32_t p, std::uint32_t i, std::uint32_t j);

// Columns scaled to unit Euclidean norm (1/sqrt(k) for weight-k columns).
Eigen::MatrixXd normalize(const SensingMatrix& matrix);

// Rebuilds a matrix from its provenance descriptor; throws
// ProvenanceRequired for descriptors that cannot be replayed.
SensingMatrix rebuild_from_provenance(const Provenance& provenance);

}  // namespace eulercs
