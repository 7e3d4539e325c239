#pragma once

// Test-side reference computations. These deliberately avoid the library's
// own algorithms: dense integer Gram matrices, schoolbook polynomial
// arithmetic, and direct transcriptions of the definitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eulercs/euler.hpp"
#include "eulercs/sensing_matrix.hpp"

namespace oracle {

// Base-p digits of `code`, constant term first, padded to r digits.
inline std::vector<std::uint32_t> digits(std::uint32_t code, std::uint32_t p, std::uint32_t r) {
  std::vector<std::uint32_t> d(r, 0);
  for (std::uint32_t i = 0; i < r; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

inline std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
  return v;
}

// (a * b) mod f over GF(p), f monic of degree r (r + 1 coefficients).
inline std::uint32_t poly_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t p,
                                 const std::vector<std::uint32_t>& f) {
  const std::uint32_t r = static_cast<std::uint32_t>(f.size()) - 1;
  const auto da = digits(a, p, r);
  const auto db = digits(b, p, r);
  std::vector<std::uint64_t> prod(2 * r, 0);
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  }
  for (std::size_t deg = prod.size(); deg-- > r;) {
    const std::uint64_t c = prod[deg] % p;
    if (c == 0) continue;
    for (std::uint32_t t = 0; t <= r; ++t) {
      prod[deg - r + t] = (prod[deg - r + t] + (p - c) * f[t]) % p;
    }
  }
  std::vector<std::uint32_t> out(r);
  for (std::uint32_t i = 0; i < r; ++i) out[i] = static_cast<std::uint32_t>(prod[i] % p);
  return undigits(out, p);
}

inline std::uint32_t poly_add(std::uint32_t a, std::uint32_t b, std::uint32_t p, std::uint32_t r) {
  auto da = digits(a, p, r);
  const auto db = digits(b, p, r);
  for (std::uint32_t i = 0; i < r; ++i) da[i] = (da[i] + db[i]) % p;
  return undigits(da, p);
}

// Integer Gram matrix of the dense {0, +-1} matrix.
inline Eigen::MatrixXi gram(const eulercs::SensingMatrix& m) {
  const Eigen::MatrixXi d = m.dense().cast<int>();
  return d.transpose() * d;
}

struct GramSummary {
  int max_abs_offdiag = 0;
  int min_diag = 0;
  int max_diag = 0;
  std::size_t pairs = 0;
};

inline GramSummary summarize_gram(const Eigen::MatrixXi& g) {
  GramSummary s;
  s.min_diag = g(0, 0);
  s.max_diag = g(0, 0);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    s.min_diag = std::min(s.min_diag, g(i, i));
    s.max_diag = std::max(s.max_diag, g(i, i));
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) {
      s.max_abs_offdiag = std::max(s.max_abs_offdiag, std::abs(g(i, j)));
      ++s.pairs;
    }
  }
  return s;
}

// Normalized coherence straight from the definition.
inline double dense_coherence(const Eigen::MatrixXd& a) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double v = std::abs(a.col(i).dot(a.col(j))) / (a.col(i).norm() * a.col(j).norm());
      best = std::max(best, v);
    }
  }
  return best;
}

// Latin + pairwise-orthogonal check by counting, independent of the validator.
inline bool is_euler_square(const eulercs::EulerSquare& s) {
  const std::uint32_t n = s.order();
  const std::uint32_t k = s.degree();
  for (std::uint32_t t = 0; t < k; ++t) {
    for (std::uint32_t i = 0; i < n; ++i) {
      std::set<std::uint32_t> row, col;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (s.at(i, j, t) >= n || s.at(j, i, t) >= n) return false;
        row.insert(s.at(i, j, t));
        col.insert(s.at(j, i, t));
      }
      if (row.size() != n || col.size() != n) return false;
    }
  }
  for (std::uint32_t a = 0; a < k; ++a) {
    for (std::uint32_t b = a + 1; b < k; ++b) {
      std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) pairs.emplace(s.at(i, j, a), s.at(i, j, b));
      }
      if (pairs.size() != static_cast<std::size_t>(n) * n) return false;
    }
  }
  return true;
}

// Smallest prime-power component of n (trial division).
inline std::uint64_t min_prime_power(std::uint64_t n) {
  std::uint64_t best = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint64_t q = 1;
    while (n % p == 0) {
      n /= p;
      q *= p;
    }
    best = std::min(best, q);
  }
  if (n > 1) best = std::min(best, n);
  return best;
}

// Prime-power components of n, by trial division.
inline std::vector<std::uint64_t> prime_power_components(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    std::uint64_t q = 1;
    while (n % p == 0) {
      n /= p;
      q *= p;
    }
    out.push_back(q);
  }
  if (n > 1) out.push_back(n);
  return out;
}

// True when no two columns share two or more rows: every row pair inside a
// column support must occur in at most one column.
inline bool row_pairs_distinct(const eulercs::SensingMatrix& m) {
  const std::size_t rows = m.rows();
  std::vector<bool> seen(rows * rows, false);
  for (const auto& col : m.columns()) {
    for (std::size_t a = 0; a < col.size(); ++a) {
      for (std::size_t b = a + 1; b < col.size(); ++b) {
        const std::size_t lo = std::min(col[a].row, col[b].row);
        const std::size_t hi = std::max(col[a].row, col[b].row);
        const std::size_t key = lo * rows + hi;
        if (seen[key]) return false;
        seen[key] = true;
      }
    }
  }
  return true;
}

inline bool prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace oracle
