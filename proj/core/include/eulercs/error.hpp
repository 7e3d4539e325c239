#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eulercs {

enum class Errc {
  InvalidPrime,
  FieldTooLarge,
  DivisionByZero,
  InvalidInput,
  InvalidOrder,
  DegreeTooLarge,
  DegreeMismatch,
  IndexNotConstructible,
  IndexTooSmall,
  UnsupportedRowSize,
  NothingToExtend,
  HadamardUnavailable,
  DegenerateColumn,
  BoundUndefined,
  ProvenanceRequired,
  ShapeError,
  ConvergenceFailure,
  InvalidSparsity,
  UndefinedSNR,
  PatchGridError,
  PatchSizeError,
  LabelError,
  ParseError,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures derive from this; code() identifies the contract violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Construction failures the CLI reports as "infeasible" rather than as misuse.
bool is_construction_error(Errc code) noexcept;

}  // namespace eulercs
