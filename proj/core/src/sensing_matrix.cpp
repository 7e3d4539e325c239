#include "eulercs/sensing_matrix.hpp"

#include <sstream>

#include "eulercs/error.hpp"

namespace eulercs {

std::optional<std::int64_t> Provenance::get(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Provenance::to_string() const {
  std::string out = kind;
  for (const auto& [k, v] : params) out += " " + k + "=" + std::to_string(v);
  return out;
}

Provenance Provenance::parse(std::string_view text) {
  Provenance prov;
  std::istringstream in{std::string(text)};
  if (!(in >> prov.kind)) throw Error(Errc::ParseError, "empty provenance descriptor");
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Errc::ParseError, "provenance parameter '" + token + "' is not key=value");
    }
    try {
      std::size_t used = 0;
      const std::string value = token.substr(eq + 1);
      const long long parsed = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      prov.params.emplace_back(token.substr(0, eq), parsed);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "provenance parameter '" + token + "' has a non-integer value");
    }
  }
  return prov;
}

std::string_view alphabet_name(Alphabet a) noexcept {
  return a == Alphabet::Binary ? "binary" : "ternary";
}

SensingMatrix::SensingMatrix(std::uint32_t rows, Alphabet alphabet, std::vector<Column> columns,
                             Provenance provenance)
    : rows_(rows), alphabet_(alphabet), columns_(std::move(columns)), provenance_(std::move(provenance)) {
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const Column& col = columns_[j];
    for (std::size_t t = 0; t < col.size(); ++t) {
      const Entry& e = col[t];
      if (e.row >= rows_) {
        throw Error(Errc::ShapeError, "column " + std::to_string(j + 1) + " references row " +
                                          std::to_string(e.row + 1) + " of " + std::to_string(rows_));
      }
      if (t > 0 && col[t - 1].row >= e.row) {
        throw Error(Errc::ShapeError, "column " + std::to_string(j + 1) + " support is not strictly ascending");
      }
      const bool ok = alphabet_ == Alphabet::Binary ? e.value == 1 : (e.value == 1 || e.value == -1);
      if (!ok) {
        throw Error(Errc::ShapeError, "column " + std::to_string(j + 1) + " holds value " +
                                          std::to_string(e.value) + " outside the " +
                                          std::string(alphabet_name(alphabet_)) + " alphabet");
      }
    }
  }
}

std::optional<std::uint32_t> SensingMatrix::column_weight() const {
  if (columns_.empty()) return std::nullopt;
  const std::size_t w = columns_.front().size();
  for (const auto& c : columns_) {
    if (c.size() != w) return std::nullopt;
  }
  return static_cast<std::uint32_t>(w);
}

std::uint64_t SensingMatrix::nonzeros() const {
  std::uint64_t total = 0;
  for (const auto& c : columns_) total += c.size();
  return total;
}

double SensingMatrix::density() const {
  if (rows_ == 0 || columns_.empty()) return 0.0;
  return static_cast<double>(nonzeros()) / (static_cast<double>(rows_) * static_cast<double>(columns_.size()));
}

Eigen::MatrixXd SensingMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, cols());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const Entry& e : columns_[j]) out(e.row, static_cast<Eigen::Index>(j)) = e.value;
  }
  return out;
}

}  // namespace eulercs
