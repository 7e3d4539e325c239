#include "eulercs/euler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "eulercs/error.hpp"

namespace eulercs {

std::uint64_t PrimePowerFactorization::smallest_component() const {
  if (components.empty()) throw Error(Errc::InvalidInput, "empty factorization");
  std::uint64_t best = components.front().value;
  for (const auto& c : components) best = std::min(best, c.value);
  return best;
}

std::uint64_t PrimePowerFactorization::largest_component() const {
  if (components.empty()) throw Error(Errc::InvalidInput, "empty factorization");
  std::uint64_t best = 0;
  for (const auto& c : components) best = std::max(best, c.value);
  return best;
}

PrimePowerFactorization factorize(std::uint64_t m) {
  if (m < 2) throw Error(Errc::InvalidInput, "cannot factorize " + std::to_string(m));
  PrimePowerFactorization out;
  out.input = m;
  std::uint64_t rest = m;
  for (std::uint64_t d = 2; d * d <= rest; ++d) {
    if (rest % d != 0) continue;
    PrimePower pp{d, 0, 1};
    while (rest % d == 0) {
      rest /= d;
      ++pp.exponent;
      pp.value *= d;
    }
    out.components.push_back(pp);
  }
  if (rest > 1) out.components.push_back({rest, 1, rest});
  return out;
}

EulerSquare::EulerSquare(std::uint32_t order, std::uint32_t degree,
                         std::vector<std::uint32_t> values, std::string provenance)
    : n_(order), k_(degree), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.size() != static_cast<std::size_t>(n_) * n_ * k_) {
    throw Error(Errc::ShapeError, "Euler square storage does not match n*n*k");
  }
}

EulerSquare mols_prime_power(const GaloisField& field, std::uint32_t degree) {
  const std::uint32_t q = field.order();
  if (degree < 1 || degree >= q) {
    throw Error(Errc::DegreeTooLarge, "degree " + std::to_string(degree) +
                                          " not in 1.." + std::to_string(q - 1));
  }
  std::vector<std::uint32_t> values(static_cast<std::size_t>(q) * q * degree);
  std::size_t pos = 0;
  for (Element x = 0; x < q; ++x) {
    for (Element y = 0; y < q; ++y) {
      for (Element t = 1; t <= degree; ++t) values[pos++] = field.add(field.mul(t, x), y);
    }
  }
  std::string prov = "gf(" + std::to_string(field.characteristic()) + "^" +
                     std::to_string(field.degree()) + ")";
  return EulerSquare(q, degree, std::move(values), std::move(prov));
}

EulerSquare reduce_degree(const EulerSquare& square, std::uint32_t degree) {
  if (degree < 1 || degree > square.degree()) {
    throw Error(Errc::DegreeTooLarge, "cannot reduce degree " + std::to_string(square.degree()) +
                                          " to " + std::to_string(degree));
  }
  const std::uint32_t n = square.order();
  std::vector<std::uint32_t> values;
  values.reserve(static_cast<std::size_t>(n) * n * degree);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t t = 0; t < degree; ++t) values.push_back(square.at(i, j, t));
    }
  }
  return EulerSquare(n, degree, std::move(values),
                     square.provenance() + "|k=" + std::to_string(degree));
}

EulerSquare macneish_product(const EulerSquare& a, const EulerSquare& b) {
  if (a.degree() != b.degree()) {
    throw Error(Errc::DegreeMismatch, "degrees " + std::to_string(a.degree()) + " and " +
                                          std::to_string(b.degree()) + " differ");
  }
  const std::uint32_t n1 = a.order();
  const std::uint32_t n2 = b.order();
  const std::uint32_t k = a.degree();
  const std::uint32_t n = n1 * n2;
  std::vector<std::uint32_t> values(static_cast<std::size_t>(n) * n * k);
  EulerSquare out(n, k, std::move(values), "(" + a.provenance() + ")x(" + b.provenance() + ")");
  for (std::uint32_t i1 = 0; i1 < n1; ++i1) {
    for (std::uint32_t i2 = 0; i2 < n2; ++i2) {
      for (std::uint32_t j1 = 0; j1 < n1; ++j1) {
        for (std::uint32_t j2 = 0; j2 < n2; ++j2) {
          for (std::uint32_t r = 0; r < k; ++r) {
            out.at(i1 * n2 + i2, j1 * n2 + j2, r) = a.at(i1, j1, r) * n2 + b.at(i2, j2, r);
          }
        }
      }
    }
  }
  return out;
}

std::uint32_t macneish_bound(std::uint64_t n) {
  return static_cast<std::uint32_t>(factorize(n).smallest_component() - 1);
}

EulerSquare euler_square(std::uint32_t order, std::uint32_t degree) {
  if (order < 3) throw Error(Errc::InvalidOrder, "order must be >= 3, got " + std::to_string(order));
  const auto factors = factorize(order);
  const std::uint64_t bound = factors.smallest_component() - 1;
  if (degree < 1 || degree > bound) {
    throw Error(Errc::IndexNotConstructible,
                "index (" + std::to_string(order) + "," + std::to_string(degree) +
                    ") exceeds the MacNeish bound k <= " + std::to_string(bound));
  }
  EulerSquare result;
  bool first = true;
  for (const auto& c : factors.components) {
    const GaloisField field = build_field(static_cast<std::uint32_t>(c.prime), c.exponent);
    EulerSquare part = reduce_degree(mols_prime_power(field, field.order() - 1), degree);
    result = first ? std::move(part) : macneish_product(result, part);
    first = false;
  }
  return result;
}

ValidationReport validate_euler_square(const EulerSquare& square) {
  ValidationReport report;
  const std::uint32_t n = square.order();
  const std::uint32_t k = square.degree();
  auto fail = [&](Violation v, std::string msg) {
    report.violation = v;
    report.message = std::move(msg);
    return report;
  };
  auto cell = [](std::uint32_t i, std::uint32_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      for (std::uint32_t r = 0; r < k; ++r) {
        if (square.at(i, j, r) >= n) {
          report.row = i;
          report.col = j;
          report.coord = r;
          return fail(Violation::ValueRange, "value out of range at cell " + cell(i, j));
        }
      }
    }
  }

  std::vector<std::int64_t> seen(n);
  for (std::uint32_t r = 0; r < k; ++r) {
    for (std::uint32_t i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), -1);
      for (std::uint32_t j = 0; j < n; ++j) {
        const std::uint32_t v = square.at(i, j, r);
        if (seen[v] >= 0) {
          report.row = i;
          report.col = j;
          report.coord = r;
          report.other_row = i;
          report.other_col = static_cast<std::uint32_t>(seen[v]);
          return fail(Violation::RowLatin, "row " + std::to_string(i + 1) + " repeats value " +
                                               std::to_string(v) + " in coordinate " +
                                               std::to_string(r + 1) + " at cell " + cell(i, j));
        }
        seen[v] = j;
      }
    }
    for (std::uint32_t j = 0; j < n; ++j) {
      std::fill(seen.begin(), seen.end(), -1);
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t v = square.at(i, j, r);
        if (seen[v] >= 0) {
          report.row = i;
          report.col = j;
          report.coord = r;
          report.other_row = static_cast<std::uint32_t>(seen[v]);
          report.other_col = j;
          return fail(Violation::ColumnLatin, "column " + std::to_string(j + 1) +
                                                  " repeats value " + std::to_string(v) +
                                                  " in coordinate " + std::to_string(r + 1) +
                                                  " at cell " + cell(i, j));
        }
        seen[v] = i;
      }
    }
  }

  std::vector<std::int64_t> pair_seen(static_cast<std::size_t>(n) * n);
  for (std::uint32_t r = 0; r < k; ++r) {
    for (std::uint32_t s = r + 1; s < k; ++s) {
      std::fill(pair_seen.begin(), pair_seen.end(), -1);
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
          const std::size_t key = static_cast<std::size_t>(square.at(i, j, r)) * n + square.at(i, j, s);
          if (pair_seen[key] >= 0) {
            const auto prev = static_cast<std::uint32_t>(pair_seen[key]);
            report.row = i;
            report.col = j;
            report.coord = r;
            report.other_coord = s;
            report.other_row = prev / n;
            report.other_col = prev % n;
            return fail(Violation::Orthogonality,
                        "coordinates " + std::to_string(r + 1) + "," + std::to_string(s + 1) +
                            " repeat an ordered pair at cells " + cell(prev / n, prev % n) +
                            " and " + cell(i, j));
          }
          pair_seen[key] = static_cast<std::int64_t>(i) * n + j;
        }
      }
    }
  }
  return report;
}

void write_euler_square(std::ostream& out, const EulerSquare& square) {
  const std::uint32_t n = square.order();
  const std::uint32_t k = square.degree();
  out << n << ' ' << k << '\n';
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      for (std::uint32_t r = 0; r < k; ++r) {
        if (r) out << ',';
        out << square.at(i, j, r);
      }
    }
    out << '\n';
  }
}

EulerSquare read_euler_square(std::istream& in) {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  if (!(in >> n >> k) || n == 0 || k == 0) throw Error(Errc::ParseError, "line 1: expected \"n k\"");
  std::vector<std::uint32_t> values;
  values.reserve(static_cast<std::size_t>(n) * n * k);
  for (std::size_t c = 0; c < static_cast<std::size_t>(n) * n; ++c) {
    std::string token;
    if (!(in >> token)) {
      throw Error(Errc::ParseError, "line " + std::to_string(c / n + 2) + ": missing cell");
    }
    std::stringstream cell(token);
    std::string part;
    std::uint32_t count = 0;
    while (std::getline(cell, part, ',')) {
      try {
        values.push_back(static_cast<std::uint32_t>(std::stoul(part)));
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, "line " + std::to_string(c / n + 2) + ": bad value '" + part + "'");
      }
      ++count;
    }
    if (count != k) {
      throw Error(Errc::ParseError, "line " + std::to_string(c / n + 2) + ": cell has " +
                                        std::to_string(count) + " values, expected " + std::to_string(k));
    }
  }
  return EulerSquare(n, k, std::move(values), "file");
}

}  // namespace eulercs
