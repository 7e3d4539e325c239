#include "eulercs/construct.hpp"

#include <algorithm>
#include <cmath>

#include "eulercs/error.hpp"
#include "eulercs/fields.hpp"

namespace eulercs {

namespace {

std::string idx(std::uint64_t n, std::uint64_t k) {
  return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

std::vector<Column> binary_columns(const EulerSquare& square) {
  const std::uint32_t n = square.order();
  const std::uint32_t k = square.degree();
  std::vector<Column> columns;
  columns.reserve(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      Column col(k);
      for (std::uint32_t l = 0; l < k; ++l) col[l] = Entry{l * n + square.at(i, j, l), 1};
      columns.push_back(std::move(col));
    }
  }
  return columns;
}

HadamardMatrix sylvester_double(const HadamardMatrix& h) {
  const std::uint32_t n = h.order();
  std::vector<std::int8_t> out(static_cast<std::size_t>(4) * n * n);
  const std::uint32_t m = 2 * n;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::int8_t v = h.at(i, j);
      out[static_cast<std::size_t>(i) * m + j] = v;
      out[static_cast<std::size_t>(i) * m + j + n] = v;
      out[static_cast<std::size_t>(i + n) * m + j] = v;
      out[static_cast<std::size_t>(i + n) * m + j + n] = static_cast<std::int8_t>(-v);
    }
  }
  return HadamardMatrix(m, std::move(out));
}

// Paley I: H = I + [[0, 1^T], [-1, Q]] with Q the Jacobsthal matrix of GF(q).
HadamardMatrix paley_one(std::uint32_t q) {
  std::vector<int> chi(q, -1);
  chi[0] = 0;
  for (std::uint64_t x = 1; x < q; ++x) chi[x * x % q] = 1;
  const std::uint32_t n = q + 1;
  std::vector<std::int8_t> out(static_cast<std::size_t>(n) * n, 0);
  auto set = [&](std::uint32_t i, std::uint32_t j, int v) {
    out[static_cast<std::size_t>(i) * n + j] = static_cast<std::int8_t>(v);
  };
  for (std::uint32_t j = 1; j < n; ++j) {
    set(0, j, 1);
    set(j, 0, -1);
  }
  for (std::uint32_t i = 0; i < q; ++i) {
    for (std::uint32_t j = 0; j < q; ++j) set(i + 1, j + 1, chi[(j + q - i) % q]);
  }
  for (std::uint32_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i) * n + i] += 1;
  return HadamardMatrix(n, std::move(out));
}

}  // namespace

SensingMatrix build_binary_matrix(const EulerSquare& square) {
  const std::uint32_t n = square.order();
  const std::uint32_t k = square.degree();
  if (k < 2 || n < 3) {
    throw Error(Errc::IndexTooSmall, "index " + idx(n, k) + " needs n >= 3 and k >= 2");
  }
  return SensingMatrix(n * k, Alphabet::Binary, binary_columns(square),
                       Provenance{"euler", {{"n", n}, {"k", k}}});
}

EulerSquare square_from_matrix(const SensingMatrix& matrix, std::uint32_t n, std::uint32_t k) {
  if (matrix.rows() != static_cast<std::uint64_t>(n) * k || matrix.cols() != static_cast<std::uint64_t>(n) * n) {
    throw Error(Errc::ShapeError, "a " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                                      " matrix is not the matrix of index " + idx(n, k));
  }
  std::vector<std::uint32_t> values(static_cast<std::size_t>(n) * n * k);
  for (std::uint32_t c = 0; c < matrix.cols(); ++c) {
    const Column& col = matrix.column(c);
    if (col.size() != k) {
      throw Error(Errc::ShapeError, "column " + std::to_string(c + 1) + " has " + std::to_string(col.size()) +
                                        " ones, expected " + std::to_string(k));
    }
    for (std::uint32_t l = 0; l < k; ++l) {
      const std::uint32_t r = col[l].row;
      if (r / n != l || col[l].value != 1) {
        throw Error(Errc::ShapeError, "column " + std::to_string(c + 1) + " has no single one in row block " +
                                          std::to_string(l + 1));
      }
      values[static_cast<std::size_t>(c) * k + l] = r % n;
    }
  }
  return EulerSquare(n, k, std::move(values), "matrix");
}

SensingMatrix build_for_row_size(std::uint32_t rows) {
  if (rows < 6) {
    throw Error(Errc::UnsupportedRowSize,
                "row size " + std::to_string(rows) + " is below the smallest constructible size 6");
  }
  const auto factors = factorize(rows);
  std::uint32_t order = 0;
  std::uint32_t degree = 0;
  if (factors.is_prime_power()) {
    const auto& pp = factors.components.front();
    if (pp.exponent == 1) {
      throw Error(Errc::UnsupportedRowSize,
                  "row size " + std::to_string(rows) +
                      " is prime; prime and prime-square row sizes are excluded");
    }
    if (pp.exponent == 2) {
      throw Error(Errc::UnsupportedRowSize,
                  "row size " + std::to_string(rows) + " is the square of the prime " +
                      std::to_string(pp.prime) + "; prime and prime-square row sizes are excluded");
    }
    degree = static_cast<std::uint32_t>(pp.prime);
    order = rows / degree;
  } else {
    degree = static_cast<std::uint32_t>(factors.smallest_component());
    order = rows / degree;
  }
  const SensingMatrix base = build_binary_matrix(euler_square(order, degree));
  return SensingMatrix(rows, Alphabet::Binary, base.columns(),
                       Provenance{"rows", {{"m", rows}, {"n", order}, {"k", degree}}});
}

std::uint64_t ExtensionPlan::total_columns() const {
  std::uint64_t total = static_cast<std::uint64_t>(order) * order;
  for (const auto& s : stages) total += s.columns;
  return total;
}

ExtensionPlan plan_extension(std::uint32_t order) {
  if (order < 3) throw Error(Errc::InvalidOrder, "order must be >= 3, got " + std::to_string(order));
  auto factors = factorize(order);
  if (factors.is_prime_power()) {
    throw Error(Errc::NothingToExtend,
                "order " + std::to_string(order) + " is a prime power; there is no component to peel");
  }
  ExtensionPlan plan;
  plan.order = order;
  plan.degree = static_cast<std::uint32_t>(factors.smallest_component() - 1);
  if (plan.degree < 2) {
    throw Error(Errc::IndexTooSmall, "order " + std::to_string(order) +
                                         " only admits degree " + std::to_string(plan.degree));
  }
  std::vector<std::uint64_t> remaining;
  for (const auto& c : factors.components) remaining.push_back(c.value);
  std::sort(remaining.begin(), remaining.end());

  std::uint32_t previous = order;
  std::vector<std::uint32_t> offsets{0};
  std::uint64_t copies = 1;
  while (remaining.size() >= 2) {
    ExtensionStage stage;
    stage.peeled = static_cast<std::uint32_t>(remaining.back());
    remaining.pop_back();
    stage.order = previous / stage.peeled;
    copies *= plan.degree;
    stage.copies = copies;
    stage.columns = static_cast<std::uint64_t>(stage.order) * stage.order * copies;
    for (std::uint32_t o : offsets) {
      for (std::uint32_t s = 0; s < plan.degree; ++s) stage.offsets.push_back(o + s * previous);
    }
    offsets = stage.offsets;
    previous = stage.order;
    plan.stages.push_back(std::move(stage));
  }
  return plan;
}

ExtendedMatrix build_extended(std::uint32_t order) {
  ExtensionPlan plan = plan_extension(order);
  const std::uint32_t k = plan.degree;
  std::vector<Column> columns = binary_columns(euler_square(order, k));
  columns.reserve(plan.total_columns());
  for (const auto& stage : plan.stages) {
    const std::vector<Column> block = binary_columns(euler_square(stage.order, k));
    for (std::uint32_t offset : stage.offsets) {
      for (const Column& c : block) {
        Column shifted = c;
        for (Entry& e : shifted) e.row += offset;
        columns.push_back(std::move(shifted));
      }
    }
  }
  SensingMatrix matrix(order * k, Alphabet::Binary, std::move(columns),
                       Provenance{"extended", {{"n", order}, {"k", k}}});
  return ExtendedMatrix{std::move(matrix), std::move(plan)};
}

HadamardMatrix::HadamardMatrix(std::uint32_t order, std::vector<std::int8_t> entries)
    : order_(order), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(order_) * order_) {
    throw Error(Errc::ShapeError, "Hadamard storage does not match order^2");
  }
}

bool HadamardMatrix::is_valid() const {
  for (std::uint32_t i = 0; i < order_; ++i) {
    for (std::uint32_t j = 0; j < order_; ++j) {
      if (at(i, j) != 1 && at(i, j) != -1) return false;
      std::int64_t dot = 0;
      for (std::uint32_t t = 0; t < order_; ++t) dot += at(i, t) * at(j, t);
      if (dot != (i == j ? static_cast<std::int64_t>(order_) : 0)) return false;
    }
  }
  return true;
}

HadamardMatrix build_hadamard(std::uint32_t order) {
  auto unavailable = [&]() {
    return Error(Errc::HadamardUnavailable,
                 "no Sylvester/Paley construction for order " + std::to_string(order));
  };
  if (order == 0) throw unavailable();
  if (order == 1) return HadamardMatrix(1, {1});
  if (order % 2 != 0 || (order > 2 && order % 4 != 0)) throw unavailable();

  if ((order & (order - 1)) == 0) {
    HadamardMatrix h(1, {1});
    while (h.order() < order) h = sylvester_double(h);
    return h;
  }
  for (std::uint32_t base = order; base % 4 == 0; base /= 2) {
    const std::uint32_t q = base - 1;
    if (is_prime(q) && q % 4 == 3) {
      HadamardMatrix h = paley_one(q);
      while (h.order() < order) h = sylvester_double(h);
      return h;
    }
  }
  throw unavailable();
}

SensingMatrix build_ternary(std::uint32_t p, std::uint32_t i, std::uint32_t j) {
  if (!is_prime(p)) throw Error(Errc::InvalidPrime, std::to_string(p) + " is not prime");
  if (i < 1 || (j != 1 && j != 2)) {
    throw Error(Errc::InvalidInput, "ternary construction needs i >= 1 and j in {1,2}");
  }
  std::uint64_t q = 1;
  for (std::uint32_t t = 0; t < i; ++t) q *= p;
  if (q <= j + 1) {
    throw Error(Errc::IndexTooSmall, "degree p^i - j = " + std::to_string(q - j) + " is below 2");
  }
  const auto order = static_cast<std::uint32_t>(q);
  const std::uint32_t k = order - j;

  HadamardMatrix h;
  try {
    h = build_hadamard(k);
  } catch (const Error& e) {
    if (e.code() != Errc::HadamardUnavailable) throw;
    try {
      h = build_hadamard(k + 1);
    } catch (const Error& e2) {
      if (e2.code() != Errc::HadamardUnavailable) throw;
      throw Error(Errc::HadamardUnavailable, "no Hadamard matrix of order " + std::to_string(k) +
                                                 " or " + std::to_string(k + 1));
    }
  }

  const SensingMatrix base = build_binary_matrix(euler_square(order, k));
  std::vector<Column> columns;
  columns.reserve(static_cast<std::size_t>(base.cols()) * k);
  for (const Column& c : base.columns()) {
    for (std::uint32_t t = 0; t < k; ++t) {
      Column out(k);
      for (std::uint32_t l = 0; l < k; ++l) out[l] = Entry{c[l].row, h.at(l, t)};
      columns.push_back(std::move(out));
    }
  }
  return SensingMatrix(base.rows(), Alphabet::Ternary, std::move(columns),
                       Provenance{"ternary", {{"p", p}, {"i", i}, {"j", j}, {"h", h.order()}}});
}

Eigen::MatrixXd normalize(const SensingMatrix& matrix) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(matrix.rows(), matrix.cols());
  for (std::size_t c = 0; c < matrix.columns().size(); ++c) {
    const Column& col = matrix.columns()[c];
    if (col.empty()) {
      throw Error(Errc::DegenerateColumn, "column " + std::to_string(c + 1) + " is zero");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(col.size()));
    for (const Entry& e : col) out(e.row, static_cast<Eigen::Index>(c)) = e.value * scale;
  }
  return out;
}

SensingMatrix rebuild_from_provenance(const Provenance& provenance) {
  auto need = [&](const char* key) {
    const auto v = provenance.get(key);
    if (!v || *v < 0) {
      throw Error(Errc::ProvenanceRequired,
                  "descriptor '" + provenance.to_string() + "' lacks parameter " + key);
    }
    return static_cast<std::uint32_t>(*v);
  };
  if (provenance.kind == "euler") return build_binary_matrix(euler_square(need("n"), need("k")));
  if (provenance.kind == "rows") return build_for_row_size(need("m"));
  if (provenance.kind == "extended") return build_extended(need("n")).matrix;
  if (provenance.kind == "ternary") return build_ternary(need("p"), need("i"), need("j"));
  throw Error(Errc::ProvenanceRequired,
              "descriptor '" + provenance.to_string() + "' cannot be rebuilt");
}

}  // namespace eulercs
