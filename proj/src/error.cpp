#include "quasimin/error.hpp"

#include <sstream>

namespace quasimin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotLightlike: return "NotLightlike";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::DegenerateNullSpace: return "DegenerateNullSpace";
    case ErrorKind::NotQuasiMinimal: return "NotQuasiMinimal";
    case ErrorKind::NullityNotOne: return "NullityNotOne";
    case ErrorKind::InadmissibleFamily: return "InadmissibleFamily";
    case ErrorKind::VanishingCurvature: return "VanishingCurvature";
    case ErrorKind::NotArcLength: return "NotArcLength";
    case ErrorKind::WrongCausalType: return "WrongCausalType";
    case ErrorKind::NotOnForm: return "NotOnForm";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string admissibility_message(ErrorKind kind, const std::string& condition, double t) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind) << ": condition " << condition << " violated at t=" << t;
  return os.str();
}

}  // namespace

AdmissibilityError::AdmissibilityError(ErrorKind kind, std::string condition, double t)
    : Error(kind, admissibility_message(kind, condition, t)), condition_(std::move(condition)), t_(t) {}

}  // namespace quasimin
