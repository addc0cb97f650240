#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cccp {

enum class ErrorKind {
  CholeskyFailure,
  EigFailure,
  DimMismatch,
  DomainError,
  OracleFailure,
  InnerSolverFailure,
  SingularGradient,
  SingularAggregate,
  DivergenceDetected,
  RankDeficiency,
  StepFailure,
  QuadratureNonConvergence,
  IoError,
};

std::string_view kind_name(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cccp
