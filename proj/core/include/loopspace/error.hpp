#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loopspace {

enum class ErrorKind {
  InvalidArgument,
  OffManifold,
  IntegrationDiverged,
  OutOfInjectivityDomain,
  ShootingFailed,
  OutOfV,
  OutsideTube,
  NotInChartDomain,
  NotInOverlap,
  BaseMismatch,
  GridTooCoarse,
  NotPointwiseLinear,
  SingularFrame,
  OutsidePatch,
  OutsideAveragingDomain,
  IndexUnstable,
  SingularSymbol,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can dispatch on the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace loopspace
