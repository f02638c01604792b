#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hz {

enum class ErrorKind {
  OverlappingIntervals,
  NonHyperbolicGenerator,
  InvalidGroup,
  NonInteriorPoint,
  CapacityExceeded,
  PruneBoundViolated,
  TailDominates,
  OutsideConvergence,
  TailTooLarge,
  NonDecaying,
  NoZeroInBracket,
  StripViolation,
  NearZeroOfZ,
  ContourThroughZero,
  QuadratureStall,
  RegimeViolation,
  CacheUnwritable,
  InputError,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports carries one of the kinds above so the
// CLI can map it to a diagnostic and an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hz
