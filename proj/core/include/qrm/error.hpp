#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrm {

enum class ErrorKind {
  ShapeMismatch,
  DomainError,
  OrderMismatch,
  ArithmeticError,
  SpaceMismatch,
  IndexError,
  NotABijection,
  DuplicateName,
  NormalizationShapeError,
  ConstraintTypeError,
  OrderError,
  InfeasibleScenario,
  EmptyFrontier,
  InvalidArgument,
  // QRML front-end
  SyntaxError,
  UnresolvedType,
  IllFormedOrder,
  UnboundedDomain,
  UnknownComponent,
  CyclicContainment,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers (and the
/// CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qrm
