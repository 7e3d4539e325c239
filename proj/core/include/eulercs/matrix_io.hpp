#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "eulercs/sensing_matrix.hpp"

namespace eulercs {

// ESM v1 text format:
//   ESM v1 rows=<m> cols=<M> alphabet=<binary|ternary> k=<k>
//   <provenance descriptor>
//   one line per column: 1-based rows ascending, "row" or "row:+1"/"row:-1"
// k=0 marks a matrix without a common column weight.
void write_esm(std::ostream& out, const SensingMatrix& matrix);
// `declared_weight`, when given, receives the header's k.
SensingMatrix read_esm(std::istream& in, std::uint32_t* declared_weight = nullptr);

SensingMatrix load_esm(const std::string& path, std::uint32_t* declared_weight = nullptr);
void save_esm(const std::string& path, const SensingMatrix& matrix);

// Dense comma-separated values, one matrix row per line. Doubles use the
// shortest round-trip representation.
void write_csv(std::ostream& out, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_csv(std::istream& in);

}  // namespace eulercs
