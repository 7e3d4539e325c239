#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eulercs/fields.hpp"

namespace eulercs {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  std::uint64_t value = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct PrimePowerFactorization {
  std::uint64_t input = 0;
  std::vector<PrimePower> components;  // primes strictly increasing

  std::uint64_t smallest_component() const;
  std::uint64_t largest_component() const;
  bool is_prime_power() const noexcept { return components.size() == 1; }
};

PrimePowerFactorization factorize(std::uint64_t m);

/// Euler square of index (n, k): an n*n array whose cells hold k-tuples over
/// 0..n-1, equivalently k mutually orthogonal Latin squares of order n.
///
/// Cells are addressed 0-based here; the matrix constructions use the
/// row-major cell order (row, col) -> row*n + col as the column index.
class EulerSquare {
 public:
  EulerSquare() = default;
  EulerSquare(std::uint32_t order, std::uint32_t degree, std::vector<std::uint32_t> values,
              std::string provenance);

  std::uint32_t order() const noexcept { return n_; }
  std::uint32_t degree() const noexcept { return k_; }
  const std::string& provenance() const noexcept { return provenance_; }

  std::uint32_t at(std::uint32_t row, std::uint32_t col, std::uint32_t coord) const {
    return values_[(static_cast<std::size_t>(row) * n_ + col) * k_ + coord];
  }
  std::uint32_t& at(std::uint32_t row, std::uint32_t col, std::uint32_t coord) {
    return values_[(static_cast<std::size_t>(row) * n_ + col) * k_ + coord];
  }

  const std::vector<std::uint32_t>& values() const noexcept { return values_; }

  friend bool operator==(const EulerSquare& a, const EulerSquare& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.values_ == b.values_;
  }

 private:
  std::uint32_t n_ = 0;
  std::uint32_t k_ = 0;
  std::vector<std::uint32_t> values_;
  std::string provenance_;
};

// Coordinate t of cell (x, y) is alpha_t * x + y in the field, alpha_t being
// the element with code t, for t = 1..k.
EulerSquare mols_prime_power(const GaloisField& field, std::uint32_t degree);

// Keeps the first `degree` coordinates of every cell.
EulerSquare reduce_degree(const EulerSquare& square, std::uint32_t degree);

EulerSquare macneish_product(const EulerSquare& a, const EulerSquare& b);

// Largest degree MacNeish's construction reaches for order n: minpp(n) - 1.
std::uint32_t macneish_bound(std::uint64_t n);

EulerSquare euler_square(std::uint32_t order, std::uint32_t degree);

enum class Violation { None, ValueRange, RowLatin, ColumnLatin, Orthogonality };

struct ValidationReport {
  Violation violation = Violation::None;
  // Offending location, 0-based; for orthogonality `other_*` is the earlier
  // cell carrying the same ordered pair.
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  std::uint32_t coord = 0;
  std::uint32_t other_coord = 0;
  std::uint32_t other_row = 0;
  std::uint32_t other_col = 0;
  std::string message;

  bool ok() const noexcept { return violation == Violation::None; }
};

ValidationReport validate_euler_square(const EulerSquare& square);

// Text form: "n k" header, then n lines of n cells; a cell is k
// comma-separated values and cells are whitespace separated.
void write_euler_square(std::ostream& out, const EulerSquare& square);
EulerSquare read_euler_square(std::istream& in);

}  // namespace eulercs
