#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace quasimin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificationFailed = 1;
inline constexpr int kExitInadmissible = 2;
inline constexpr int kExitConfigError = 3;

struct GenerateArgs {
  std::string config;
  std::optional<std::string> out;  ///< overrides output.csv of the config
};

struct CertifyArgs {
  std::string config;
  std::optional<std::string> report;  ///< overrides output.report of the config
  std::optional<std::string> grid;    ///< "NxM"
  std::optional<double> tol;          ///< pointwise relation tolerance (lightlike and frame)
  bool convergence = false;
};

/// CSV plus <out>.json sidecar.
int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_list_families(std::ostream& out);

/// Full command line front end (CLI11).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace quasimin::cli
