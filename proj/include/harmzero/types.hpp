#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace harmzero {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Failure categories shared by every module. Each public operation that can
/// fail throws `Error` tagged with one of these.
enum class ErrorKind {
  InvalidInput,
  NonConvergence,
  PoleProximity,
  NotAPole,
  DegenerateMapping,
  DegeneratePole,
  HitCritical,
  TraceFailure,
  GuardViolation,
  InitialPhaseFailure,
  RayRejected,
  SpawnFailure,
  StepFailure,
  SingularZeroSuspected,
  Exhausted,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// A point of the extended complex plane.
struct ExtendedPoint {
  Complex z{};
  bool infinite = false;

  static ExtendedPoint infinity() { return {Complex{}, true}; }
  static ExtendedPoint finite(Complex w) { return {w, false}; }
};

}  // namespace harmzero
