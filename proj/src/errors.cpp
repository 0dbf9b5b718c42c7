#include "harmzero/types.hpp"

namespace harmzero {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::NotAPole: return "NotAPole";
    case ErrorKind::DegenerateMapping: return "DegenerateMapping";
    case ErrorKind::DegeneratePole: return "DegeneratePole";
    case ErrorKind::HitCritical: return "HitCritical";
    case ErrorKind::TraceFailure: return "TraceFailure";
    case ErrorKind::GuardViolation: return "GuardViolation";
    case ErrorKind::InitialPhaseFailure: return "InitialPhaseFailure";
    case ErrorKind::RayRejected: return "RayRejected";
    case ErrorKind::SpawnFailure: return "SpawnFailure";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::SingularZeroSuspected: return "SingularZeroSuspected";
    case ErrorKind::Exhausted: return "Exhausted";
  }
  return "Unknown";
}

}  // namespace harmzero
