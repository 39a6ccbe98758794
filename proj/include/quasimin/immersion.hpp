#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quasimin/indefinite_linalg.hpp"
#include "quasimin/numerics.hpp"
#include "quasimin/space_forms.hpp"

namespace quasimin {

struct Rect {
  Interval s;
  Interval t;

  bool contains(ChartPoint p) const noexcept { return s.contains(p.s) && t.contains(p.t); }
};

/// Part of the excluded singular locus: the chart point is singular where
/// |value(s,t)| falls below the skip tolerance.
struct SingularCondition {
  std::string description;
  std::function<double(double, double)> value;
};

/// Closed-form structure coefficients (phi, omega, gamma) of a chart in which
/// e1 = d/ds and e2 = (1/phi) d/dt.
struct CoefficientChart {
  int c = 0;
  int eps = 1;
  std::function<double(double, double)> phi;
  std::function<double(double, double)> omega;
  std::function<double(double, double)> gamma;
};

/// Surface chart (s,t) -> flat ambient coordinates (4 components in E^4_2,
/// 5 for the quadric forms).
class Immersion {
 public:
  Immersion(std::string name, ChartMap map, SpaceForm form, Rect domain, std::vector<SingularCondition> singular = {});

  Vec operator()(double s, double t) const;
  Vec operator()(ChartPoint p) const { return (*this)(p.s, p.t); }

  const std::string& name() const noexcept { return name_; }
  const ChartMap& map() const noexcept { return map_; }
  const SpaceForm& form() const noexcept { return form_; }
  const Rect& domain() const noexcept { return domain_; }
  const std::vector<SingularCondition>& singular_locus() const noexcept { return singular_; }

  /// Description of the first singular condition met within tol, if any.
  std::optional<std::string> singular_reason(ChartPoint p, double tol) const;

  const std::optional<CoefficientChart>& reference_chart() const noexcept { return reference_; }
  void set_reference_chart(CoefficientChart chart) { reference_ = std::move(chart); }

 private:
  std::string name_;
  ChartMap map_;
  SpaceForm form_;
  Rect domain_;
  std::vector<SingularCondition> singular_;
  std::optional<CoefficientChart> reference_;
};

/// Pointwise extrinsic data. Indices 0 = s, 1 = t.
struct FundamentalData {
  ChartPoint point;
  int c = 0;
  Vec position;
  std::array<Vec, 2> tangent;
  Eigen::Matrix2d g;
  Eigen::Matrix2d g_inv;
  /// alpha(d_i, d_j) in the normal space of M inside the space form.
  std::array<std::array<Vec, 2>, 2> alpha;
  Vec H;
  std::array<Vec, 2> normal;

  const Vec& alpha_ss() const { return alpha[0][0]; }
  const Vec& alpha_st() const { return alpha[0][1]; }
  const Vec& alpha_tt() const { return alpha[1][1]; }

  /// Ambient vector of the tangent vector with chart coefficients (a, b).
  Vec tangent_vector(const Eigen::Vector2d& coef) const;
  /// Component of v normal to M (and to the position vector for quadric forms).
  Vec normal_part(const Vec& v) const;
  /// alpha(X, Y) for tangent coefficient vectors.
  Vec alpha_of(const Eigen::Vector2d& x, const Eigen::Vector2d& y) const;
};

/// Shape operator A_xi as a matrix acting on chart coefficients:
/// g(A_xi X, Y) = <alpha(X,Y), xi>.
Eigen::Matrix2d shape_operator(const FundamentalData& d, const Vec& xi);

FundamentalData fundamental_data(const Immersion& f, ChartPoint p);

struct NullityOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-7;
};

struct RelativeNullSpace {
  int dimension = 0;
  /// Chart coefficients (ds, dt) of a basis.
  std::vector<Eigen::Vector2d> basis;
};

/// Kernel of X -> (alpha(X, d_s), alpha(X, d_t)).
RelativeNullSpace relative_null_space(const FundamentalData& d, const NullityOptions& opts = {});
RelativeNullSpace relative_null_space(const Immersion& f, ChartPoint p, const NullityOptions& opts = {});

struct AdaptedFrame {
  int eps = 1;
  Eigen::Vector2d e1_coef;
  Eigen::Vector2d e2_coef;
  Vec e1;
  Vec e2;
  Vec e3;
  Vec e4;
};

struct FrameOptions {
  double lightlike_tol = 1e-6;
  double nonzero_tol = 1e-6;
  NullityOptions nullity;
};

/// Frame with e1 spanning the relative null space, e3 = -2 eps H and e4 its
/// lightlike partner in the normal plane. Throws NotQuasiMinimal,
/// NullityNotOne or DegenerateNullSpace.
AdaptedFrame adapted_frame(const FundamentalData& d, const FrameOptions& opts = {});
AdaptedFrame adapted_frame(const Immersion& f, ChartPoint p, const FrameOptions& opts = {});

struct StructureCoefficients {
  double omega = 0.0;
  double gamma = 0.0;
  double phi = 0.0;
};

/// Default step for differentiating the frame field along coordinate lines.
double frame_step(const Immersion& f);

/// omega = phi(e1), gamma = phi(e2) from D_{e_i} e3 paired with -e4; phi is
/// the inverse d/dt coefficient of e2 (e2 oriented with positive d/dt part).
StructureCoefficients structure_coefficients(const Immersion& f, ChartPoint p, const AdaptedFrame& frame,
                                             std::optional<double> step = std::nullopt);

}  // namespace quasimin
