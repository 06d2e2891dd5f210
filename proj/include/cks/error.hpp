#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cks {

enum class ErrorKind {
  NotInContext,
  OracleScaleExceeded,
  NotPurified,
  ObjectSetMismatch,
  AttributeCollision,
  InvalidContext,
  IndexOutOfRange,
  InvalidLattice,
  IoError,
  ScaleValueError,
  SyntaxError,
  UndeclaredName,
  DuplicateDeclaration,
  CyclicOrder,
  EmptyExtent,
  EmptyIntent,
  ThresholdOutOfRange,
  WrongScope,
  WrongMode,
  NotDisplayable,
  GraphIntegrity,
  EmptyInput,
};

std::string_view to_string(ErrorKind kind);

/// Source position inside a parsed document; line and column are 1-based,
/// zero means "unknown".
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message);
  Error(ErrorKind kind, const std::string& message, SourceLocation where);

  ErrorKind kind() const noexcept { return kind_; }
  const SourceLocation& where() const noexcept { return where_; }

private:
  ErrorKind kind_;
  SourceLocation where_;
};

}  // namespace cks
