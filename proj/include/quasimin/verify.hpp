#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quasimin/families.hpp"
#include "quasimin/immersion.hpp"

namespace quasimin {

/// Uniform ns x nt node grid over an immersion's domain, endpoints included.
struct SampleGrid {
  int ns = 20;
  int nt = 20;
};

std::vector<ChartPoint> grid_points(const Rect& domain, SampleGrid grid);

struct CertifyOptions {
  double lightlike_tol = 1e-6;
  double nonzero_tol = 1e-6;
  double frame_tol = 1e-6;
  double structure_tol = 1e-5;
  double residual_tol = 1e-4;
  double pde_tol = 1e-6;
  /// Outer step for the curvature-equation finite differences.
  double residual_step = 0.02;
  /// Coarse step of the step-halving study (truncation must dominate there).
  double convergence_step = 0.05;
  /// A point is skipped when some singular condition is within this of zero.
  double singular_tol = 1e-3;
  NullityOptions nullity;
};

struct CurvatureResiduals {
  double gauss = 0.0;
  double codazzi = 0.0;
  double ricci = 0.0;

  double max() const noexcept;
};

/// Residuals of the Gauss, Codazzi and Ricci equations at p for the
/// coordinate basis. Christoffel symbols come from differences of the induced
/// metric at step h; normal connection terms from differences of a normal
/// frame extended by projection. Throws SingularPoint near degenerate points.
CurvatureResiduals curvature_residuals(const Immersion& f, ChartPoint p, double h = 0.02);

struct FrameResiduals {
  /// max over |<e1,e1>-eps|, |<e2,e2>+eps|, |<e1,e2>|, |<e3,e3>|, |<e4,e4>|, |<e3,e4>+1|.
  double metric = 0.0;
  /// max over |alpha(e1,e1)|, |alpha(e1,e2)|, |alpha(e2,e2)-e3| (Euclidean).
  double second_form = 0.0;
  /// max |<alpha(e_i,e_j), e3>|, i.e. the entries of A_{e3} in the frame.
  double shape_e3 = 0.0;
  int eps = 0;
  StructureCoefficients measured;
  /// |measured - reference| for (omega, gamma, phi) when a reference chart exists.
  std::optional<double> structure_error;
};

struct PointRecord {
  ChartPoint point;
  bool skipped = false;
  std::string skip_reason;

  std::optional<CausalCharacter> h_causal;
  double h_inner = 0.0;
  double h_norm = 0.0;
  std::optional<int> nullity;
  std::optional<FrameResiduals> frame;
  std::string frame_error;
  std::optional<CurvatureResiduals> curvature;
  std::optional<double> pde_residual;
  std::vector<std::string> failures;
};

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t failed = 0;
  double max_residual = 0.0;
  std::string note;
};

struct ConvergenceStudy {
  std::string ode_problem;
  double ode_order = 0.0;
  double residual_step = 0.0;
  CurvatureResiduals coarse;  ///< grid maxima at step h
  CurvatureResiduals fine;    ///< grid maxima at step h/2
  /// log2(coarse/fine) of the combined maximum.
  double residual_order = 0.0;
  /// Smallest log2 ratio over the equations above the noise floor (inf if none).
  double worst_equation_order = 0.0;
  /// Per equation (gauss, codazzi, ricci): log2(coarse/fine) and whether both sit at the floor.
  std::array<double, 3> equation_order{};
  std::array<bool, 3> at_floor{};
  bool residual_at_noise_floor = false;
  bool pass = false;
};

/// An equation whose residual stays at or below this at both steps counts as
/// converged in the step-halving check (1% of the default residual tolerance).
inline constexpr double kResidualNoiseFloor = 1e-6;

struct CertificationReport {
  std::string surface;
  std::string space_form;
  SampleGrid grid;
  std::vector<PointRecord> points;
  std::vector<PropertyResult> properties;
  std::optional<ConvergenceStudy> convergence;

  std::size_t skipped() const;
  bool pass() const;
  const PropertyResult* property(const std::string& name) const;
};

/// Property names used in reports.
namespace property {
inline constexpr const char* kQuasiMinimal = "quasi_minimal";
inline constexpr const char* kPositiveNullity = "positive_relative_nullity";
inline constexpr const char* kNullityOne = "nullity_exactly_one";
inline constexpr const char* kLemmaFrame = "lemma_frame";
inline constexpr const char* kStructure = "structure_coefficients";
inline constexpr const char* kCurvature = "curvature_equations";
inline constexpr const char* kIntrinsicPde = "intrinsic_pde";
inline constexpr const char* kConvergence = "convergence";
}  // namespace property

CertificationReport certify_quasi_minimal(const Immersion& f, SampleGrid grid, const CertifyOptions& opts = {});
/// Pass requires nullity >= 1 everywhere. The nullity_exactly_one entry is
/// informational; a dimension-2 point is noted as a degenerate pass.
CertificationReport certify_positive_relative_nullity(const Immersion& f, SampleGrid grid,
                                                      const CertifyOptions& opts = {});
CertificationReport certify_lemma_frame(const Immersion& f, SampleGrid grid, const CertifyOptions& opts = {});
CertificationReport certify_curvature_equations(const Immersion& f, SampleGrid grid, const CertifyOptions& opts = {});

/// All of the above in one pass, plus the intrinsic equations of the
/// reference chart when the immersion carries one. Here nullity_exactly_one
/// is required.
CertificationReport certify_all(const Immersion& f, SampleGrid grid, const CertifyOptions& opts = {});

/// max of |phi_s + phi omega|, |omega_s - omega^2 - eps c|,
/// |gamma_s - omega gamma - omega_t/phi| at p (4th-order differences, step h).
double intrinsic_pde_residual(const CoefficientChart& chart, ChartPoint p, double h = 1e-3);

/// Sup-norm of intrinsic_pde_residual over the grid.
double intrinsic_pde_sup(const CoefficientChart& chart, const Rect& domain, SampleGrid grid, double h = 1e-3);

/// Observed order of solve_lode2 from three runs at h0, h0/2, h0/4 on [t0, t1]
/// (self-convergence: log2 of successive max differences at common nodes).
double ode_convergence_order(int sigma, const ScalarFn1& rhs, double t0, double b0, double db0, double t1,
                             double h0 = 0.1);

/// Step-halving study of the curvature residuals over the grid. The ODE line
/// uses the family's own equation when given, else b'' = b, b(0)=b'(0)=1 on [0,1].
struct OdeProblem {
  int sigma = 1;
  ScalarFn1 rhs;
  double t0 = 0.0;
  double b0 = 1.0;
  double db0 = 1.0;
  double t1 = 1.0;
  std::string label;
};

ConvergenceStudy convergence_study(const Immersion& f, SampleGrid grid, const CertifyOptions& opts,
                                   const std::optional<OdeProblem>& ode = std::nullopt);

}  // namespace quasimin
