#pragma once

#include <stdexcept>
#include <string>

namespace quasimin {

enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  NotLightlike,
  DegeneratePlane,
  EvaluationFailure,
  SingularPoint,
  DegenerateNullSpace,
  NotQuasiMinimal,
  NullityNotOne,
  InadmissibleFamily,
  VanishingCurvature,
  NotArcLength,
  WrongCausalType,
  NotOnForm,
  ConfigError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a family violates its non-vanishing condition. `condition` is
/// an entry of the fixed message table (see families.hpp) and `t` the first
/// sample where the condition failed.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(ErrorKind kind, std::string condition, double t);

  const std::string& condition() const noexcept { return condition_; }
  double t() const noexcept { return t_; }

 private:
  std::string condition_;
  double t_;
};

}  // namespace quasimin
