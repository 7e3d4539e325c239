#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eulercs {

// Construction descriptor, e.g. "euler n=11 k=5" or "extended n=12 k=2".
struct Provenance {
  std::string kind;
  std::vector<std::pair<std::string, std::int64_t>> params;

  std::optional<std::int64_t> get(std::string_view key) const;
  std::string to_string() const;
  static Provenance parse(std::string_view text);

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

enum class Alphabet { Binary, Ternary };

std::string_view alphabet_name(Alphabet a) noexcept;

struct Entry {
  std::uint32_t row = 0;  // 0-based
  std::int8_t value = 1;

  friend bool operator==(const Entry&, const Entry&) = default;
};

using Column = std::vector<Entry>;

/// Sparse {0,1} or {0,+1,-1} measurement matrix stored as per-column supports.
///
/// The constructor enforces the storage invariants: supports sorted by row
/// without duplicates, rows in range, and values allowed by the alphabet.
class SensingMatrix {
 public:
  SensingMatrix() = default;
  SensingMatrix(std::uint32_t rows, Alphabet alphabet, std::vector<Column> columns,
                Provenance provenance);

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return static_cast<std::uint32_t>(columns_.size()); }
  Alphabet alphabet() const noexcept { return alphabet_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const Column& column(std::size_t j) const { return columns_.at(j); }

  // Common number of non-zeros per column, if every column has the same count.
  std::optional<std::uint32_t> column_weight() const;
  std::uint64_t nonzeros() const;
  double density() const;

  Eigen::MatrixXd dense() const;

  friend bool operator==(const SensingMatrix& a, const SensingMatrix& b) {
    return a.rows_ == b.rows_ && a.alphabet_ == b.alphabet_ && a.columns_ == b.columns_;
  }

 private:
  std::uint32_t rows_ = 0;
  Alphabet alphabet_ = Alphabet::Binary;
  std::vector<Column> columns_;
  Provenance provenance_;
};

}  // namespace eulercs
