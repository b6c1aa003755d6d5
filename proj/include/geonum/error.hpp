#ifndef GEONUM_ERROR_HPP
#define GEONUM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace geonum {

enum class ErrorKind {
  SingularBasis,
  DimensionTooSmall,
  DimensionMismatch,
  BudgetExceeded,
  NotLatticePoint,
  UnboundedBody,
  RankDeficit,
  DegenerateMass,
  NoConvergence,
  VolumeStall,
  QuadrantEmpty,
  InvalidArgument,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotLatticePoint: return "NotLatticePoint";
    case ErrorKind::UnboundedBody: return "UnboundedBody";
    case ErrorKind::RankDeficit: return "RankDeficit";
    case ErrorKind::DegenerateMass: return "DegenerateMass";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::VolumeStall: return "VolumeStall";
    case ErrorKind::QuadrantEmpty: return "QuadrantEmpty";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace geonum

#endif  // GEONUM_ERROR_HPP
