#include "cccp/error.hpp"

#include <iostream>
#include <mutex>
#include <string>

#include "cccp/diagnostics.hpp"

namespace cccp {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CholeskyFailure: return "CholeskyFailure";
    case ErrorKind::EigFailure: return "EigFailure";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OracleFailure: return "OracleFailure";
    case ErrorKind::InnerSolverFailure: return "InnerSolverFailure";
    case ErrorKind::SingularGradient: return "SingularGradient";
    case ErrorKind::SingularAggregate: return "SingularAggregate";
    case ErrorKind::DivergenceDetected: return "DivergenceDetected";
    case ErrorKind::RankDeficiency: return "RankDeficiency";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  std::swap(handler_slot(), handler);
  return handler;
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

}  // namespace cccp
