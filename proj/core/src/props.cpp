#include "eulercs/props.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "eulercs/error.hpp"
#include "eulercs/parallel.hpp"

namespace eulercs {

namespace {

struct PairMax {
  double value = -1.0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::int64_t overlap = 0;
  std::int64_t weights = 1;

  // Larger value wins; ties go to the lexicographically smaller pair.
  void offer(double v, std::uint32_t i, std::uint32_t j, std::int64_t ov, std::int64_t w) {
    if (v > value || (v == value && (i < a || (i == a && j < b)))) {
      value = v;
      a = i;
      b = j;
      overlap = ov;
      weights = w;
    }
  }
};

constexpr std::size_t kColumnBlock = 64;

}  // namespace

CoherenceReport coherence(const SensingMatrix& matrix) {
  const std::uint32_t cols = matrix.cols();
  if (cols < 2) throw Error(Errc::InvalidInput, "coherence needs at least two columns");
  for (std::uint32_t c = 0; c < cols; ++c) {
    if (matrix.column(c).empty()) {
      throw Error(Errc::DegenerateColumn, "column " + std::to_string(c + 1) + " is zero");
    }
  }

  struct Cell {
    std::uint32_t col;
    std::int8_t value;
  };
  std::vector<std::vector<Cell>> by_row(matrix.rows());
  for (std::uint32_t c = 0; c < cols; ++c) {
    for (const Entry& e : matrix.column(c)) by_row[e.row].push_back({c, e.value});
  }

  const std::size_t blocks = (cols + kColumnBlock - 1) / kColumnBlock;
  std::vector<PairMax> partial(blocks);
  parallel_for(blocks, [&](std::size_t block) {
    std::vector<std::int64_t> dot(cols, 0);
    std::vector<std::uint32_t> touched;
    PairMax best;
    const std::uint32_t first = static_cast<std::uint32_t>(block * kColumnBlock);
    const std::uint32_t last = std::min<std::uint32_t>(cols, first + kColumnBlock);
    for (std::uint32_t c = first; c < last; ++c) {
      const Column& col = matrix.column(c);
      for (const Entry& e : col) {
        for (const Cell& other : by_row[e.row]) {
          if (other.col <= c) continue;
          if (dot[other.col] == 0) touched.push_back(other.col);
          dot[other.col] += static_cast<std::int64_t>(e.value) * other.value;
        }
      }
      const auto wc = static_cast<std::int64_t>(col.size());
      for (std::uint32_t d : touched) {
        const std::int64_t ov = std::llabs(dot[d]);
        const std::int64_t w = wc * static_cast<std::int64_t>(matrix.column(d).size());
        best.offer(static_cast<double>(ov) / std::sqrt(static_cast<double>(w)), c, d, ov, w);
        dot[d] = 0;
      }
      touched.clear();
      // Pairs that never share a row contribute zero; record the first one
      // only so an all-disjoint matrix still reports a pair.
      if (best.value < 0.0 && c + 1 < cols) best.offer(0.0, c, c + 1, 0, wc);
    }
    partial[block] = best;
  });

  PairMax best;
  for (const auto& p : partial) best.offer(p.value, p.a, p.b, p.overlap, p.weights);

  CoherenceReport report;
  report.rows = matrix.rows();
  report.cols = cols;
  report.coherence = best.value < 0.0 ? 0.0 : best.value;
  report.col_a = best.a;
  report.col_b = best.b;
  report.max_overlap = best.overlap;
  report.weight_product = best.weights;
  if (cols > matrix.rows()) report.welch = welch_bound(matrix.rows(), cols);
  report.density = matrix.density();
  for (const Column& c : matrix.columns()) ++report.weight_histogram[static_cast<std::uint32_t>(c.size())];
  return report;
}

double coherence(const Eigen::MatrixXd& matrix) {
  if (matrix.cols() < 2) throw Error(Errc::InvalidInput, "coherence needs at least two columns");
  Eigen::MatrixXd unit = matrix;
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    const double norm = unit.col(j).norm();
    if (norm == 0.0) throw Error(Errc::DegenerateColumn, "column " + std::to_string(j + 1) + " is zero");
    unit.col(j) /= norm;
  }
  const Eigen::MatrixXd gram = unit.transpose() * unit;
  double best = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) best = std::max(best, std::abs(gram(i, j)));
  }
  return best;
}

void write_report(std::ostream& out, const CoherenceReport& report) {
  out << "rows=" << report.rows << '\n'
      << "cols=" << report.cols << '\n'
      << "coherence=" << report.coherence << '\n'
      << "argmax=" << report.col_a + 1 << ',' << report.col_b + 1 << '\n'
      << "max_overlap=" << report.max_overlap << '\n'
      << "weight_product=" << report.weight_product << '\n'
      << "welch=";
  if (std::isnan(report.welch)) {
    out << "undefined";
  } else {
    out << report.welch;
  }
  out << '\n' << "density=" << report.density << '\n';
  out << "column_weights=";
  bool first = true;
  for (const auto& [w, count] : report.weight_histogram) {
    if (!first) out << ',';
    first = false;
    out << w << ':' << count;
  }
  out << '\n';
}

double welch_bound(std::uint64_t rows, std::uint64_t cols) {
  if (rows < 1 || cols <= rows) {
    throw Error(Errc::BoundUndefined, "Welch bound needs M > m >= 1 (m=" + std::to_string(rows) +
                                          ", M=" + std::to_string(cols) + ")");
  }
  const double m = static_cast<double>(rows);
  const double big = static_cast<double>(cols);
  return std::sqrt((big - m) / (m * (big - 1.0)));
}

std::uint64_t max_binary_columns(std::uint64_t m, std::uint64_t k, std::uint64_t r) {
  if (!(m >= k && k >= r && r >= 1)) {
    throw Error(Errc::InvalidInput, "max_binary_columns needs m >= k >= r >= 1");
  }
  __extension__ using u128 = unsigned __int128;
  auto binom = [](std::uint64_t n, std::uint64_t s) {
    u128 acc = 1;
    for (std::uint64_t i = 1; i <= s; ++i) {
      acc = acc * (n - s + i) / i;
      if (acc > static_cast<u128>(std::numeric_limits<std::uint64_t>::max())) {
        throw Error(Errc::InvalidInput, "binomial coefficient overflows 64 bits");
      }
    }
    return static_cast<std::uint64_t>(acc);
  };
  return binom(m, r) / binom(k, r);
}

double rip_delta(double coherence, std::uint64_t order) {
  if (order < 1) throw Error(Errc::InvalidInput, "RIP order must be >= 1");
  return static_cast<double>(order - 1) * coherence;
}

std::uint64_t sparsity_guarantee(double coherence) {
  if (!(coherence >= 0.0)) throw Error(Errc::InvalidInput, "coherence must be >= 0");
  if (coherence == 0.0) return kUnboundedSparsity;
  const double bound = 0.5 * (1.0 + 1.0 / coherence);
  // Snap values within rounding distance of an integer so that mu = 1/k
  // computed in floating point gives the same answer as the exact rational.
  const double snapped = std::nearbyint(bound);
  const double b = std::abs(bound - snapped) <= 1e-9 * std::max(1.0, bound) ? snapped : bound;
  const double largest = std::ceil(b) - 1.0;
  return largest <= 0.0 ? 0 : static_cast<std::uint64_t>(largest);
}

double aspect_constant(const SensingMatrix& matrix, const CoherenceReport& report) {
  const auto& kind = matrix.provenance().kind;
  if (kind != "euler" && kind != "rows" && kind != "extended") {
    throw Error(Errc::ProvenanceRequired, "aspect constant needs an Euler-family provenance, got '" +
                                              matrix.provenance().to_string() + "'");
  }
  if (report.max_overlap == 0) throw Error(Errc::InvalidInput, "coherence is zero");
  // M / (m mu)^2 with mu^2 = overlap^2 / weight_product, kept as one ratio.
  const double m = matrix.rows();
  const double num = static_cast<double>(matrix.cols()) * static_cast<double>(report.weight_product);
  const double den = m * m * static_cast<double>(report.max_overlap * report.max_overlap);
  return num / den;
}

double aspect_constant(const SensingMatrix& matrix) {
  return aspect_constant(matrix, coherence(matrix));
}

}  // namespace eulercs
