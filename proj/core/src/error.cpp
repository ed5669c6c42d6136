#include "cocycle/error.hpp"

namespace cocycle {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::EmptyCore: return "EmptyCore";
    case ErrorKind::SingularValue: return "SingularValue";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::NonTransverse: return "NonTransverse";
    case ErrorKind::NoReturns: return "NoReturns";
    case ErrorKind::MinorVanishes: return "MinorVanishes";
    case ErrorKind::ResonantEigenvalues: return "ResonantEigenvalues";
    case ErrorKind::BumpOverlap: return "BumpOverlap";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::InsufficientEccentricity: return "InsufficientEccentricity";
    case ErrorKind::KernelHit: return "KernelHit";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::UnknownOp: return "UnknownOp";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularValue:
    case ErrorKind::NoConvergence:
    case ErrorKind::DegenerateSplit:
    case ErrorKind::NonTransverse:
    case ErrorKind::NoReturns:
    case ErrorKind::InsufficientEccentricity:
    case ErrorKind::KernelHit:
    case ErrorKind::ZeroMatrix:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cocycle
