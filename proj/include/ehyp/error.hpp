#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ehyp {

// Every failure the library reports carries one of these kinds. The CLI maps
// the kind's category onto its exit code.
enum class ErrorKind {
  InvalidArgument,
  // geometry
  MetricSingular,
  InvalidChord,
  DegenerateDirection,
  Cavitation,
  // surfaces
  LightCone,
  DivergenceUndefined,
  LegendreSingular,
  NotClosed,
  PathDependence,
  // hodge-disc
  NonConvergence,
  FoliationGap,
  OutsideHyperbolicRegion,
  // friedrichs
  InvalidTypeChange,
  SingularMultiplier,
  InadmissibleBoundary,
  Infeasible,
  SolverBreakdown,
  // energy
  DensityDomain,
  // cli
  ConfigError,
};

enum class ErrorCategory { Config, Domain, Solver };

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MetricSingular: return "MetricSingular";
    case ErrorKind::InvalidChord: return "InvalidChord";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::Cavitation: return "Cavitation";
    case ErrorKind::LightCone: return "LightCone";
    case ErrorKind::DivergenceUndefined: return "DivergenceUndefined";
    case ErrorKind::LegendreSingular: return "LegendreSingular";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::PathDependence: return "PathDependence";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::FoliationGap: return "FoliationGap";
    case ErrorKind::OutsideHyperbolicRegion: return "OutsideHyperbolicRegion";
    case ErrorKind::InvalidTypeChange: return "InvalidTypeChange";
    case ErrorKind::SingularMultiplier: return "SingularMultiplier";
    case ErrorKind::InadmissibleBoundary: return "InadmissibleBoundary";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::SolverBreakdown: return "SolverBreakdown";
    case ErrorKind::DensityDomain: return "DensityDomain";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

constexpr ErrorCategory category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
      return ErrorCategory::Config;
    case ErrorKind::NonConvergence:
    case ErrorKind::FoliationGap:
    case ErrorKind::SolverBreakdown:
      return ErrorCategory::Solver;
    default:
      return ErrorCategory::Domain;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace ehyp
