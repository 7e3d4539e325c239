#include "eulercs/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "eulercs/error.hpp"

namespace eulercs {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string header_value(const std::string& token, const std::string& key, std::size_t line) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) parse_fail(line, "expected " + prefix + "..., got '" + token + "'");
  return token.substr(prefix.size());
}

std::uint64_t parse_uint(const std::string& text, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) parse_fail(line, "'" + text + "' is not a non-negative integer");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void write_esm(std::ostream& out, const SensingMatrix& matrix) {
  out << "ESM v1 rows=" << matrix.rows() << " cols=" << matrix.cols()
      << " alphabet=" << alphabet_name(matrix.alphabet())
      << " k=" << matrix.column_weight().value_or(0) << '\n';
  out << matrix.provenance().to_string() << '\n';
  const bool ternary = matrix.alphabet() == Alphabet::Ternary;
  for (const Column& col : matrix.columns()) {
    bool first = true;
    for (const Entry& e : col) {
      if (!first) out << ' ';
      first = false;
      out << e.row + 1;
      if (ternary) out << (e.value > 0 ? ":+1" : ":-1");
    }
    out << '\n';
  }
}

SensingMatrix read_esm(std::istream& in, std::uint32_t* declared_weight) {
  std::string line;
  if (!std::getline(in, line)) parse_fail(1, "missing ESM header");
  std::istringstream header(line);
  std::string magic, version, t_rows, t_cols, t_alpha, t_k, extra;
  if (!(header >> magic >> version >> t_rows >> t_cols >> t_alpha >> t_k) || magic != "ESM") {
    parse_fail(1, "expected 'ESM v1 rows=<m> cols=<M> alphabet=<a> k=<k>'");
  }
  if (version != "v1") parse_fail(1, "unsupported format version '" + version + "'");
  if (header >> extra) parse_fail(1, "unexpected trailing token '" + extra + "'");
  const std::uint64_t rows = parse_uint(header_value(t_rows, "rows", 1), 1);
  const std::uint64_t cols = parse_uint(header_value(t_cols, "cols", 1), 1);
  const std::string alpha = header_value(t_alpha, "alphabet", 1);
  // Column weight mismatches against k are content, reported by verification.
  const std::uint64_t k = parse_uint(header_value(t_k, "k", 1), 1);
  if (declared_weight) *declared_weight = static_cast<std::uint32_t>(k);
  Alphabet alphabet;
  if (alpha == "binary") {
    alphabet = Alphabet::Binary;
  } else if (alpha == "ternary") {
    alphabet = Alphabet::Ternary;
  } else {
    parse_fail(1, "unknown alphabet '" + alpha + "'");
  }
  if (rows == 0 || rows > UINT32_MAX) parse_fail(1, "row count out of range");

  if (!std::getline(in, line)) parse_fail(2, "missing provenance line");
  Provenance provenance;
  try {
    provenance = Provenance::parse(line);
  } catch (const Error& e) {
    parse_fail(2, e.what());
  }

  std::vector<Column> columns;
  columns.reserve(cols);
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == std::char_traits<char>::eof() && columns.size() == cols) break;
    if (columns.size() == cols) parse_fail(line_no, "more column lines than cols=" + std::to_string(cols));
    std::istringstream tokens(line);
    std::string tok;
    Column col;
    while (tokens >> tok) {
      Entry e;
      std::string row_text = tok;
      if (alphabet == Alphabet::Ternary) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) parse_fail(line_no, "ternary entry '" + tok + "' lacks ':sign'");
        row_text = tok.substr(0, colon);
        const std::string sign = tok.substr(colon + 1);
        if (sign == "+1" || sign == "+" || sign == "1") {
          e.value = 1;
        } else if (sign == "-1" || sign == "-") {
          e.value = -1;
        } else {
          parse_fail(line_no, "bad sign in '" + tok + "'");
        }
      }
      const std::uint64_t row = parse_uint(row_text, line_no);
      if (row < 1 || row > rows) parse_fail(line_no, "row " + row_text + " outside 1.." + std::to_string(rows));
      if (!col.empty() && col.back().row >= row - 1) {
        parse_fail(line_no, "rows must be strictly ascending");
      }
      e.row = static_cast<std::uint32_t>(row - 1);
      col.push_back(e);
    }
    columns.push_back(std::move(col));
  }
  if (columns.size() != cols) {
    parse_fail(line_no + 1, "expected " + std::to_string(cols) + " column lines, found " +
                                std::to_string(columns.size()));
  }
  return SensingMatrix(static_cast<std::uint32_t>(rows), alphabet, std::move(columns),
                       std::move(provenance));
}

SensingMatrix load_esm(const std::string& path, std::uint32_t* declared_weight) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return read_esm(in, declared_weight);
}

void save_esm(const std::string& path, const SensingMatrix& matrix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_esm(out, matrix);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      double v = 0.0;
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (ec != std::errc() || ptr != end) parse_fail(line_no, "'" + cell + "' is not a number");
      values.push_back(v);
    }
    if (!rows.empty() && values.size() != rows.front().size()) parse_fail(line_no, "ragged row");
    rows.push_back(std::move(values));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

}  // namespace eulercs
