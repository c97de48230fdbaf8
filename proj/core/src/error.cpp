#include "loopspace/error.hpp"

namespace loopspace {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OffManifold: return "OffManifold";
    case ErrorKind::IntegrationDiverged: return "IntegrationDiverged";
    case ErrorKind::OutOfInjectivityDomain: return "OutOfInjectivityDomain";
    case ErrorKind::ShootingFailed: return "ShootingFailed";
    case ErrorKind::OutOfV: return "OutOfV";
    case ErrorKind::OutsideTube: return "OutsideTube";
    case ErrorKind::NotInChartDomain: return "NotInChartDomain";
    case ErrorKind::NotInOverlap: return "NotInOverlap";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::NotPointwiseLinear: return "NotPointwiseLinear";
    case ErrorKind::SingularFrame: return "SingularFrame";
    case ErrorKind::OutsidePatch: return "OutsidePatch";
    case ErrorKind::OutsideAveragingDomain: return "OutsideAveragingDomain";
    case ErrorKind::IndexUnstable: return "IndexUnstable";
    case ErrorKind::SingularSymbol: return "SingularSymbol";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace loopspace
