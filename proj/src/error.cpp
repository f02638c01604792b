#include "hz/error.hpp"

namespace hz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorKind::NonHyperbolicGenerator: return "NonHyperbolicGenerator";
    case ErrorKind::InvalidGroup: return "InvalidGroup";
    case ErrorKind::NonInteriorPoint: return "NonInteriorPoint";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::PruneBoundViolated: return "PruneBoundViolated";
    case ErrorKind::TailDominates: return "TailDominates";
    case ErrorKind::OutsideConvergence: return "OutsideConvergence";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::NonDecaying: return "NonDecaying";
    case ErrorKind::NoZeroInBracket: return "NoZeroInBracket";
    case ErrorKind::StripViolation: return "StripViolation";
    case ErrorKind::NearZeroOfZ: return "NearZeroOfZ";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::QuadratureStall: return "QuadratureStall";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::CacheUnwritable: return "CacheUnwritable";
    case ErrorKind::InputError: return "InputError";
  }
  return "Unknown";
}

}  // namespace hz
