#include "quasimin/immersion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

std::string at(ChartPoint p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.s << ", " << p.t << ")";
  return os.str();
}

}  // namespace

Immersion::Immersion(std::string name, ChartMap map, SpaceForm form, Rect domain,
                     std::vector<SingularCondition> singular)
    : name_(std::move(name)), map_(std::move(map)), form_(form), domain_(domain), singular_(std::move(singular)) {}

Vec Immersion::operator()(double s, double t) const {
  Vec v = map_(s, t);
  if (!(v.space() == form_.ambient())) {
    throw Error(ErrorKind::DimensionMismatch, "immersion '" + name_ + "' returned a vector outside its ambient space");
  }
  return v;
}

std::optional<std::string> Immersion::singular_reason(ChartPoint p, double tol) const {
  for (const auto& cond : singular_) {
    if (std::abs(cond.value(p.s, p.t)) <= tol) return cond.description;
  }
  return std::nullopt;
}

Vec FundamentalData::tangent_vector(const Eigen::Vector2d& coef) const {
  return coef(0) * tangent[0] + coef(1) * tangent[1];
}

Vec FundamentalData::normal_part(const Vec& v) const {
  if (c == 0) return project_out(v, tangent);
  const std::array<Vec, 3> span{tangent[0], tangent[1], position};
  return project_out(v, span);
}

Vec FundamentalData::alpha_of(const Eigen::Vector2d& x, const Eigen::Vector2d& y) const {
  Vec out(position.space());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out += (x(i) * y(j)) * alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return out;
}

Eigen::Matrix2d shape_operator(const FundamentalData& d, const Vec& xi) {
  Eigen::Matrix2d pairing;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) pairing(i, j) = inner(d.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], xi);
  // Column i holds the coefficients of A_xi d_i.
  return d.g_inv * pairing;
}

FundamentalData fundamental_data(const Immersion& f, ChartPoint p) {
  const Partials pd = partial_derivs(f.map(), p, 2);
  const SpaceForm& form = f.form();
  if (!(pd.f.space() == form.ambient())) {
    throw Error(ErrorKind::DimensionMismatch, "immersion '" + f.name() + "' does not map into its ambient space");
  }

  Eigen::Matrix2d g;
  g << inner(pd.fs, pd.fs), inner(pd.fs, pd.ft), inner(pd.ft, pd.fs), inner(pd.ft, pd.ft);
  const double scale = pd.fs.euclidean_norm2() * pd.ft.euclidean_norm2();
  if (!(std::abs(g.determinant()) > 1e-10 * scale)) {
    throw Error(ErrorKind::SingularPoint, "degenerate induced metric at " + at(p));
  }

  const std::array<Vec, 2> tangent{pd.fs, pd.ft};
  const std::array<std::array<Vec, 2>, 2> second{{{*pd.fss, *pd.fst}, {*pd.fst, *pd.ftt}}};

  std::optional<AmbientPoint> fhat;
  if (form.is_quadric()) fhat.emplace(pd.f, form);

  auto alpha_of = [&](int i, int j) {
    const Vec alpha_hat = project_out(second[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], tangent);
    if (!fhat) return alpha_hat;
    return intrinsic_second_fundamental_form(alpha_hat, g(i, j), *fhat);
  };
  const Vec a_ss = alpha_of(0, 0);
  const Vec a_st = alpha_of(0, 1);
  const Vec a_tt = alpha_of(1, 1);

  const Eigen::Matrix2d g_inv = g.inverse();
  const Vec H = 0.5 * (g_inv(0, 0) * a_ss + 2.0 * g_inv(0, 1) * a_st + g_inv(1, 1) * a_tt);

  std::vector<Vec> normal;
  if (form.is_quadric()) {
    const std::array<Vec, 3> span{pd.fs, pd.ft, pd.f};
    normal = orthogonal_complement(span);
  } else {
    normal = orthogonal_complement(tangent);
  }
  if (normal.size() != 2) throw Error(ErrorKind::SingularPoint, "normal space is not two-dimensional at " + at(p));

  return FundamentalData{p,
                         form.curvature(),
                         pd.f,
                         tangent,
                         g,
                         g_inv,
                         {{{a_ss, a_st}, {a_st, a_tt}}},
                         H,
                         {normal[0], normal[1]}};
}

RelativeNullSpace relative_null_space(const FundamentalData& d, const NullityOptions& opts) {
  std::vector<std::vector<double>> rows;
  const int n = d.position.size();
  for (int k = 0; k < 2; ++k) {
    // Rows of X -> alpha(X, d_k).
    const Vec& a0 = d.alpha[0][static_cast<std::size_t>(k)];
    const Vec& a1 = d.alpha[1][static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) rows.push_back({a0[i], a1[i]});
  }
  const double abs_tol = opts.abs_tol * std::max(1.0, d.position.max_abs());
  RelativeNullSpace out;
  for (const auto& b : kernel(rows, 2, opts.rel_tol, abs_tol)) out.basis.emplace_back(b[0], b[1]);
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

RelativeNullSpace relative_null_space(const Immersion& f, ChartPoint p, const NullityOptions& opts) {
  return relative_null_space(fundamental_data(f, p), opts);
}

AdaptedFrame adapted_frame(const FundamentalData& d, const FrameOptions& opts) {
  if (causal_character(d.H, opts.lightlike_tol) != CausalCharacter::Lightlike ||
      d.H.euclidean_norm() <= opts.nonzero_tol) {
    throw Error(ErrorKind::NotQuasiMinimal, std::string("mean curvature vector is ") +
                                                to_string(causal_character(d.H, opts.lightlike_tol)) +
                                                " with norm below threshold or not lightlike at " + at(d.point));
  }
  const RelativeNullSpace ns = relative_null_space(d, opts.nullity);
  if (ns.dimension != 1) {
    throw Error(ErrorKind::NullityNotOne,
                "relative null space has dimension " + std::to_string(ns.dimension) + " at " + at(d.point));
  }

  Eigen::Vector2d u = ns.basis.front();
  const double q = u.dot(d.g * u);
  const Vec x = d.tangent_vector(u);
  if (std::abs(q) <= opts.lightlike_tol * x.euclidean_norm2()) {
    throw Error(ErrorKind::DegenerateNullSpace, "relative null direction is lightlike at " + at(d.point));
  }
  const int eps = q > 0 ? 1 : -1;
  u /= std::sqrt(std::abs(q));
  if (u(0) < 0 || (u(0) == 0 && u(1) < 0)) u = -u;

  const Eigen::Vector2d w = d.g * u;
  Eigen::Vector2d v(-w(1), w(0));
  const double qv = v.dot(d.g * v);
  v /= std::sqrt(std::abs(qv));
  if (v(1) < 0 || (v(1) == 0 && v(0) < 0)) v = -v;

  const Vec e3 = (-2.0 * eps) * d.H;
  const Vec e4 = lightlike_partner(e3, d.normal, opts.lightlike_tol);
  return AdaptedFrame{eps, u, v, d.tangent_vector(u), d.tangent_vector(v), e3, e4};
}

AdaptedFrame adapted_frame(const Immersion& f, ChartPoint p, const FrameOptions& opts) {
  return adapted_frame(fundamental_data(f, p), opts);
}

double frame_step(const Immersion& f) {
  const Rect& r = f.domain();
  double scale = 1.0;
  if (std::isfinite(r.s.width())) scale = std::max(scale, r.s.width());
  if (std::isfinite(r.t.width())) scale = std::max(scale, r.t.width());
  return 1e-3 * scale;
}

StructureCoefficients structure_coefficients(const Immersion& f, ChartPoint p, const AdaptedFrame& frame,
                                             std::optional<double> step) {
  const double h = step.value_or(frame_step(f));
  const double sign = -2.0 * frame.eps;
  auto e3_along_s = [&](double s) { return sign * fundamental_data(f, {s, p.t}).H; };
  auto e3_along_t = [&](double t) { return sign * fundamental_data(f, {p.s, t}).H; };
  const Vec ds = central_d1(std::function<Vec(double)>(e3_along_s), p.s, h);
  const Vec dt = central_d1(std::function<Vec(double)>(e3_along_t), p.t, h);

  const Vec d_e1 = frame.e1_coef(0) * ds + frame.e1_coef(1) * dt;
  const Vec d_e2 = frame.e2_coef(0) * ds + frame.e2_coef(1) * dt;
  StructureCoefficients out;
  out.omega = -inner(d_e1, frame.e4);
  out.gamma = -inner(d_e2, frame.e4);
  out.phi = 1.0 / frame.e2_coef(1);
  return out;
}

}  // namespace quasimin
