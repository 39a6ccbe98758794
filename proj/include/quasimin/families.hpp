#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quasimin/error.hpp"
#include "quasimin/immersion.hpp"
#include "quasimin/numerics.hpp"

namespace quasimin {

enum class FamilyTag { E42_i, E42_ii, S42_trig, S42_hyp, S42_curve_timelike, S42_curve_spacelike };

/// Fixed message table: one non-vanishing condition per family. Error exits
/// quote these verbatim.
namespace conditions {
inline constexpr const char* kForcing = "F != 0 (b''-b=F)";
inline constexpr const char* kTrig = "b''-b != 0";
inline constexpr const char* kHyp = "b''+b != 0";
inline constexpr const char* kCurveTimelike = "b''-kappa*int(kappa*b')-b != 0";
inline constexpr const char* kCurveSpacelike = "b''-kappa*int(kappa*b')+b != 0";
inline constexpr const char* kCurvature = "kappa != 0";
}  // namespace conditions

struct FamilyInfo {
  FamilyTag tag;
  const char* name;
  const char* condition;
  const char* summary;
};

const std::array<FamilyInfo, 6>& family_table();
const FamilyInfo& family_info(FamilyTag tag);
std::optional<FamilyTag> parse_family_tag(const std::string& name);

/// Result of sampling a non-vanishing condition over a t-interval.
struct AdmissibilityScan {
  std::string condition;
  std::size_t samples = 0;
  double min_abs = 0.0;
  double t_at_min = 0.0;
  bool admissible = true;
};

inline constexpr double kVanishingTol = 1e-8;

/// Samples `value` at uniform nodes of `span` (step <= h). The condition fails
/// where |value| <= kVanishingTol or between two samples of opposite sign.
/// Throws AdmissibilityError(kind, condition, t) on failure.
AdmissibilityScan scan_nonvanishing(const std::function<double(double)>& value, Interval span, double h,
                                    const std::string& condition, ErrorKind kind);

// ---------------------------------------------------------------------------
// Curves on S^2_1 in E^3_1

enum class CurveCausal { Timelike, Spacelike };

const IndefiniteSpace& minkowski3();

/// Arc-length curve on S^2_1 with its spherical Frenet apparatus:
/// timelike: alpha'' = kappa N + alpha, spacelike: alpha'' = kappa N - alpha,
/// and N' = kappa alpha' in both cases. Spacelike curves carry a timelike N.
struct SphericalCurve {
  CurveCausal causal = CurveCausal::Timelike;
  std::function<Vec(double)> alpha;
  ScalarFn1 kappa;
  std::function<Vec(double)> normal;
  bool constant_curvature = false;
  /// max |N' - kappa alpha'| observed when the apparatus was derived (0 for closed forms).
  double frenet_residual = 0.0;
};

/// alpha(t) = (a sinh(t/a), sqrt(1-a^2), a cosh(t/a)), 0 < a <= 1; kappa = sqrt(1-a^2)/a.
SphericalCurve timelike_circle(double a);
/// alpha(t) = (B, A cos(t/A), A sin(t/A)), A >= 1, B = sqrt(A^2-1); kappa = B/A.
SphericalCurve spacelike_circle(double A);

struct FrenetOptions {
  double sphere_tol = 1e-8;
  double arclength_tol = 1e-8;
  double min_curvature = 1e-8;
  double frenet_tol = 1e-6;
  std::size_t samples = 65;
};

/// Derives kappa and N from alpha alone by finite differences, after checking
/// at sample points of `span` that alpha lies on S^2_1, has the declared
/// causal type and unit speed, and that N' = kappa alpha'.
/// Throws NotOnForm, WrongCausalType, NotArcLength or VanishingCurvature.
SphericalCurve frenet_apparatus(std::function<Vec(double)> alpha, CurveCausal causal, Interval span,
                                const FrenetOptions& opts = {});

// ---------------------------------------------------------------------------
// Families

struct FamilySpec {
  FamilyTag tag = FamilyTag::E42_i;
  ScalarFn1 m;  ///< E^4_2 only
  ScalarFn1 F;  ///< E^4_2 forcing of b'' - b = F
  ScalarFn1 b;  ///< S^4_2 families
  double b0 = 0.0;
  double db0 = 0.0;
  std::optional<double> t0;  ///< defaults to the left end of the t-range
  std::optional<SphericalCurve> curve;
  int eps_sign = 1;
  Rect domain;
  double ode_step = kDefaultOdeStep;
};

struct Family {
  Immersion surface;
  std::vector<AdmissibilityScan> admissibility;
};

/// Tabulated functions extend this far beyond the t-range so that stencils
/// centred on the domain boundary stay inside.
inline constexpr double kFamilyMargin = 0.5;

enum class E42Kind { I, II };

Family make_e42(E42Kind kind, const ScalarFn1& m, const ScalarFn1& F, double b0, double db0, const Rect& domain,
                std::optional<double> t0 = std::nullopt, double ode_step = kDefaultOdeStep);
Family make_s42_trig(const ScalarFn1& b, const Rect& domain);
Family make_s42_hyp(const ScalarFn1& b, const Rect& domain);
Family make_s42_curve(CurveCausal kind, const SphericalCurve& curve, const ScalarFn1& b, int eps_sign,
                      std::optional<double> t0, const Rect& domain, double ode_step = kDefaultOdeStep);

Family build_family(const FamilySpec& spec);

/// Structure coefficient chart for c in {-1,0,1}; the block is chosen by c
/// (c = 0) or eps*c (c != 0). A must be positive on domain.t.
CoefficientChart prop32_chart(int c, int eps, const ScalarFn1& A, const ScalarFn1& m, const ScalarFn1& gamma0,
                              const Rect& domain);

// Negative controls.
Immersion control_flat_plane(const Rect& domain);
Immersion control_generic_graph(const Rect& domain);

}  // namespace quasimin
