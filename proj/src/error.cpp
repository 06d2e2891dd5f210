#include "cks/error.hpp"

namespace cks {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotInContext: return "NotInContext";
    case ErrorKind::OracleScaleExceeded: return "OracleScaleExceeded";
    case ErrorKind::NotPurified: return "NotPurified";
    case ErrorKind::ObjectSetMismatch: return "ObjectSetMismatch";
    case ErrorKind::AttributeCollision: return "AttributeCollision";
    case ErrorKind::InvalidContext: return "InvalidContext";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidLattice: return "InvalidLattice";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ScaleValueError: return "ScaleValueError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredName: return "UndeclaredName";
    case ErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrorKind::CyclicOrder: return "CyclicOrder";
    case ErrorKind::EmptyExtent: return "EmptyExtent";
    case ErrorKind::EmptyIntent: return "EmptyIntent";
    case ErrorKind::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorKind::WrongScope: return "WrongScope";
    case ErrorKind::WrongMode: return "WrongMode";
    case ErrorKind::NotDisplayable: return "NotDisplayable";
    case ErrorKind::GraphIntegrity: return "GraphIntegrity";
    case ErrorKind::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& message, SourceLocation where)
    : std::runtime_error(std::to_string(where.line) + ":" + std::to_string(where.column) + ": " +
                         message),
      kind_(kind),
      where_(where) {}

}  // namespace cks
