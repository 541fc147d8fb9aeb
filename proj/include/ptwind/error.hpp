#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ptwind {

enum class ErrorKind {
  InvalidArgument,
  UnknownFamily,
  NonInjectivePath,
  NodeEncountered,
  AliasingSuspected,
  UnsupportedBoundary,
  ConvergenceFailure,
  StepFailure,
  TurningPointOnGrid,
  AsymmetricGrid,
  NoneFound,
  SeriesDivergence,
  NewtonDivergence,
  TurningPointSuspected,
  StepUnderflow,
  WindowTooSmall,
  ConfigInvalid,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library. `index()` carries the offending sample
// for the phase errors (NodeEncountered, AliasingSuspected).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::NonInjectivePath: return "NonInjectivePath";
    case ErrorKind::NodeEncountered: return "NodeEncountered";
    case ErrorKind::AliasingSuspected: return "AliasingSuspected";
    case ErrorKind::UnsupportedBoundary: return "UnsupportedBoundary";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::TurningPointOnGrid: return "TurningPointOnGrid";
    case ErrorKind::AsymmetricGrid: return "AsymmetricGrid";
    case ErrorKind::NoneFound: return "NoneFound";
    case ErrorKind::SeriesDivergence: return "SeriesDivergence";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::TurningPointSuspected: return "TurningPointSuspected";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace ptwind
