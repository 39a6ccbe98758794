#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "quasimin/families.hpp"
#include "quasimin/verify.hpp"

namespace quasimin {

/// Closed function grammar:
///   number                              constant
///   {"fn":"const","value":c}
///   {"fn":"poly","coeffs":[a0,a1,...]}  a0 + a1 t + ...
///   {"fn":"sin|cos|sinh|cosh|exp","amp":a,"freq":w,"phase":p}   a g(w t + p)
///   {"sum":[...]}, {"product":[...]}    nesting depth <= 2
/// Derivatives of every order are exact. Throws Error(ConfigError).
ScalarFn1 parse_function(const nlohmann::json& j);

/// 0 for leaves, 1 + max child depth for sum/product.
int descriptor_depth(const nlohmann::json& j);

inline constexpr const char* kControlFlatPlane = "control-flat-plane";
inline constexpr const char* kControlGenericGraph = "control-generic-graph";

struct RunConfig {
  std::string family;
  std::optional<FamilySpec> spec;  ///< empty for the built-in controls
  Rect domain;
  SampleGrid grid;
  CertifyOptions options;
  std::optional<std::string> csv_path;
  std::optional<std::string> report_path;
  nlohmann::json echo;  ///< the config as read
};

/// Validates and resolves a config document. Throws Error(ConfigError).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Immersion plus the admissibility scans and, for the E^4_2 families, the ODE behind b.
struct BuiltSurface {
  Immersion surface;
  std::vector<AdmissibilityScan> admissibility;
  std::optional<OdeProblem> ode;
};

/// Throws AdmissibilityError for inadmissible families.
BuiltSurface build_surface(const RunConfig& cfg);

}  // namespace quasimin
