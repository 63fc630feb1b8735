#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace teichlab {

enum class Errc {
  InvalidArgument,
  PreconditionViolated,
  NotIrreducible,
  NotTypeW,
  DimensionMismatch,
  OutOfDomain,
  DegenerateGeometry,
  InvalidSurface,
  InvalidSuspension,
  BudgetExceeded,
  QuadratureUnstable,
  SingularTrajectory,
  InsufficientLevels,
  InconsistentLevels,
  ConfigError,
  Internal,
};

std::string_view errc_name(Errc code) noexcept;

// Budget-type failures are reported by the CLI with their own exit code.
bool is_numerical_budget(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace teichlab
