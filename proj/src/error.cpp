#include "teichlab/error.hpp"

namespace teichlab {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::NotTypeW: return "NotTypeW";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::InvalidSurface: return "InvalidSurface";
    case Errc::InvalidSuspension: return "InvalidSuspension";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::QuadratureUnstable: return "QuadratureUnstable";
    case Errc::SingularTrajectory: return "SingularTrajectory";
    case Errc::InsufficientLevels: return "InsufficientLevels";
    case Errc::InconsistentLevels: return "InconsistentLevels";
    case Errc::ConfigError: return "ConfigError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_numerical_budget(Errc code) noexcept {
  return code == Errc::BudgetExceeded || code == Errc::QuadratureUnstable;
}

}  // namespace teichlab
