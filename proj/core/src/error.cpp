#include "eulercs/error.hpp"

namespace eulercs {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidPrime: return "InvalidPrime";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::IndexNotConstructible: return "IndexNotConstructible";
    case Errc::IndexTooSmall: return "IndexTooSmall";
    case Errc::UnsupportedRowSize: return "UnsupportedRowSize";
    case Errc::NothingToExtend: return "NothingToExtend";
    case Errc::HadamardUnavailable: return "HadamardUnavailable";
    case Errc::DegenerateColumn: return "DegenerateColumn";
    case Errc::BoundUndefined: return "BoundUndefined";
    case Errc::ProvenanceRequired: return "ProvenanceRequired";
    case Errc::ShapeError: return "ShapeError";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::InvalidSparsity: return "InvalidSparsity";
    case Errc::UndefinedSNR: return "UndefinedSNR";
    case Errc::PatchGridError: return "PatchGridError";
    case Errc::PatchSizeError: return "PatchSizeError";
    case Errc::LabelError: return "LabelError";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_construction_error(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidPrime:
    case Errc::FieldTooLarge:
    case Errc::InvalidOrder:
    case Errc::DegreeTooLarge:
    case Errc::DegreeMismatch:
    case Errc::IndexNotConstructible:
    case Errc::IndexTooSmall:
    case Errc::UnsupportedRowSize:
    case Errc::NothingToExtend:
    case Errc::HadamardUnavailable:
      return true;
    default:
      return false;
  }
}

}  // namespace eulercs
