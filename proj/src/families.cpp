#include "quasimin/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

const std::array<FamilyInfo, 6> kFamilies{{
    {FamilyTag::E42_i, "E42-i", conditions::kForcing,
     "E^4_2: (b s+int m b', s sinh t+int m cosh, s cosh t+int m sinh, b s+int m b'), eps=+1"},
    {FamilyTag::E42_ii, "E42-ii", conditions::kForcing,
     "E^4_2: (b s+int m b', s cosh t+int m sinh, s sinh t+int m cosh, b s+int m b'), eps=-1"},
    {FamilyTag::S42_trig, "S42-trig", conditions::kTrig,
     "S^4_2: (b cos s, cos s sinh t, sin s, cos s cosh t, b cos s), cos s != 0"},
    {FamilyTag::S42_hyp, "S42-hyp", conditions::kHyp, "S^4_2: (b cosh s, sinh s, cosh s cos t, cosh s sin t, b cosh s)"},
    {FamilyTag::S42_curve_timelike, "S42-curve-timelike", conditions::kCurveTimelike,
     "S^4_2: cos s (b, alpha, b) + sin s (int kappa b', N, int kappa b'), alpha timelike on S^2_1"},
    {FamilyTag::S42_curve_spacelike, "S42-curve-spacelike", conditions::kCurveSpacelike,
     "S^4_2: cosh s (b, alpha, b) + eps sinh s (int kappa b', N, int kappa b'), alpha spacelike on S^2_1"},
}};

const IndefiniteSpace kE42{4, 2};
const IndefiniteSpace kE52{5, 2};
const IndefiniteSpace kE31{3, 1};

Interval extended(Interval t) { return {t.lo - kFamilyMargin, t.hi + kFamilyMargin}; }

double scan_step(Interval span, double h) {
  const double w = span.width();
  if (w <= 0) return 1.0;
  return std::min(h, w / 200.0);
}

}  // namespace

const std::array<FamilyInfo, 6>& family_table() { return kFamilies; }

const FamilyInfo& family_info(FamilyTag tag) {
  for (const auto& f : kFamilies)
    if (f.tag == tag) return f;
  throw Error(ErrorKind::InvalidArgument, "unknown family tag");
}

std::optional<FamilyTag> parse_family_tag(const std::string& name) {
  for (const auto& f : kFamilies)
    if (name == f.name) return f.tag;
  return std::nullopt;
}

AdmissibilityScan scan_nonvanishing(const std::function<double(double)>& value, Interval span, double h,
                                    const std::string& condition, ErrorKind kind) {
  if (!(span.hi >= span.lo) || !std::isfinite(span.lo) || !std::isfinite(span.hi)) {
    throw Error(ErrorKind::InvalidArgument, "scan_nonvanishing: need a finite interval");
  }
  const auto n = static_cast<std::size_t>(std::ceil(span.width() / h)) + 1;
  AdmissibilityScan scan{condition, n, std::numeric_limits<double>::infinity(), span.lo, true};
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? span.lo : span.lo + span.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = value(t);
    if (!std::isfinite(v)) throw AdmissibilityError(kind, condition, t);
    if (std::abs(v) < scan.min_abs) {
      scan.min_abs = std::abs(v);
      scan.t_at_min = t;
    }
    if (std::abs(v) <= kVanishingTol || (i > 0 && (v > 0) != (prev > 0))) {
      throw AdmissibilityError(kind, condition, t);
    }
    prev = v;
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Curves

const IndefiniteSpace& minkowski3() { return kE31; }

SphericalCurve timelike_circle(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "timelike_circle: need 0 < a <= 1");
  const double B = std::sqrt(std::max(0.0, 1.0 - a * a));
  const double kappa = B / a;
  SphericalCurve c;
  c.causal = CurveCausal::Timelike;
  c.alpha = [a, B](double t) { return Vec(kE31, {a * std::sinh(t / a), B, a * std::cosh(t / a)}); };
  c.normal = [a, B](double t) { return Vec(kE31, {B * std::sinh(t / a), -a, B * std::cosh(t / a)}); };
  c.kappa = ScalarFn1::constant(kappa);
  c.constant_curvature = true;
  return c;
}

SphericalCurve spacelike_circle(double A) {
  if (!(A >= 1.0)) throw Error(ErrorKind::InvalidArgument, "spacelike_circle: need A >= 1");
  const double B = std::sqrt(A * A - 1.0);
  SphericalCurve c;
  c.causal = CurveCausal::Spacelike;
  c.alpha = [A, B](double t) { return Vec(kE31, {B, A * std::cos(t / A), A * std::sin(t / A)}); };
  c.normal = [A, B](double t) { return Vec(kE31, {A, B * std::cos(t / A), B * std::sin(t / A)}); };
  c.kappa = ScalarFn1::constant(B / A);
  c.constant_curvature = true;
  return c;
}

SphericalCurve frenet_apparatus(std::function<Vec(double)> alpha, CurveCausal causal, Interval span,
                                const FrenetOptions& opts) {
  const bool timelike = causal == CurveCausal::Timelike;
  const double speed2 = timelike ? -1.0 : 1.0;

  // kappa N = alpha'' - alpha (timelike) or alpha'' + alpha (spacelike).
  auto kappa_normal = [alpha, timelike](double t) {
    const Vec d2 = central_d2(alpha, t, fd_step(t));
    return timelike ? d2 - alpha(t) : d2 + alpha(t);
  };
  auto kappa_of = [kappa_normal, timelike](double t) {
    const Vec kn = kappa_normal(t);
    const double q = inner(kn, kn);
    return std::sqrt(std::max(0.0, timelike ? q : -q));
  };
  auto normal_of = [kappa_normal, kappa_of](double t) { return kappa_normal(t) / kappa_of(t); };

  const std::size_t n = std::max<std::size_t>(opts.samples, 2);
  double worst_frenet = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = span.lo + span.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    const Vec a = alpha(t);
    if (!(a.space() == kE31)) throw Error(ErrorKind::DimensionMismatch, "frenet_apparatus: curve must live in E^3_1");
    if (std::abs(inner(a, a) - 1.0) > opts.sphere_tol) {
      throw Error(ErrorKind::NotOnForm, "frenet_apparatus: curve leaves S^2_1");
    }
    const Vec d1 = central_d1(alpha, t, fd_step(t));
    const double q = inner(d1, d1);
    if (q * speed2 <= 0.0 || causal_character(d1) != (timelike ? CausalCharacter::Timelike : CausalCharacter::Spacelike)) {
      throw Error(ErrorKind::WrongCausalType,
                  std::string("frenet_apparatus: alpha' is not ") + (timelike ? "timelike" : "spacelike"));
    }
    if (std::abs(q - speed2) > opts.arclength_tol) {
      throw Error(ErrorKind::NotArcLength, "frenet_apparatus: curve is not parametrized by arc length");
    }
    const double kappa = kappa_of(t);
    if (kappa < opts.min_curvature) {
      throw AdmissibilityError(ErrorKind::VanishingCurvature, conditions::kCurvature, t);
    }
    // N is already a second difference; a wider 6th-order stencil keeps roundoff down
    const double hn = 1e-2 * std::max(1.0, std::abs(t));
    const Vec dn = (normal_of(t + 3 * hn) - normal_of(t - 3 * hn) - 9.0 * (normal_of(t + 2 * hn) - normal_of(t - 2 * hn)) +
                    45.0 * (normal_of(t + hn) - normal_of(t - hn))) /
                   (60.0 * hn);
    worst_frenet = std::max(worst_frenet, (dn - kappa * d1).euclidean_norm());
  }
  if (worst_frenet > opts.frenet_tol) {
    throw Error(ErrorKind::InvalidArgument, "frenet_apparatus: N' = kappa alpha' fails");
  }

  SphericalCurve c;
  c.causal = causal;
  c.alpha = std::move(alpha);
  c.kappa = ScalarFn1(std::function<double(double)>(kappa_of));
  c.normal = normal_of;
  c.frenet_residual = worst_frenet;
  return c;
}

// ---------------------------------------------------------------------------
// Chart coefficients

CoefficientChart prop32_chart(int c, int eps, const ScalarFn1& A, const ScalarFn1& m, const ScalarFn1& gamma0,
                              const Rect& domain) {
  if (c < -1 || c > 1) throw Error(ErrorKind::InvalidArgument, "prop32_chart: c must be -1, 0 or 1");
  if (eps != 1 && eps != -1) throw Error(ErrorKind::InvalidArgument, "prop32_chart: eps must be +1 or -1");
  if (std::isfinite(domain.t.lo) && std::isfinite(domain.t.hi)) {
    const std::size_t n = 201;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = domain.t.lo + domain.t.width() * static_cast<double>(i) / static_cast<double>(n - 1);
      if (!(A(t) > 0.0)) throw Error(ErrorKind::InvalidArgument, "prop32_chart: A must be positive on the domain");
    }
  }

  CoefficientChart chart;
  chart.c = c;
  chart.eps = eps;
  if (c == 0) {
    chart.phi = [A, m](double s, double t) { return A(t) * (s + m(t)); };
    chart.omega = [m](double s, double t) { return -1.0 / (s + m(t)); };
    chart.gamma = [A, m, gamma0](double s, double t) {
      const double u = s + m(t);
      return gamma0(t) / u - m.derivative(t, 1) / (A(t) * u * u);
    };
  } else if (eps * c == 1) {
    chart.phi = [A, m](double s, double t) { return A(t) * std::cos(s + m(t)); };
    chart.omega = [m](double s, double t) { return std::tan(s + m(t)); };
    chart.gamma = [A, m, gamma0](double s, double t) {
      const double u = s + m(t);
      return (gamma0(t) + std::tan(u) * m.derivative(t, 1) / A(t)) / std::cos(u);
    };
  } else {
    chart.phi = [A, m](double s, double t) { return A(t) * std::cosh(s + m(t)); };
    chart.omega = [m](double s, double t) { return -std::tanh(s + m(t)); };
    chart.gamma = [A, m, gamma0](double s, double t) {
      const double u = s + m(t);
      return (gamma0(t) - std::tanh(u) * m.derivative(t, 1) / A(t)) / std::cosh(u);
    };
  }
  return chart;
}

// ---------------------------------------------------------------------------
// Generators

Family make_e42(E42Kind kind, const ScalarFn1& m, const ScalarFn1& F, double b0, double db0, const Rect& domain,
                std::optional<double> t0, double ode_step) {
  const double start = t0.value_or(domain.t.lo);
  auto scan = scan_nonvanishing([&F](double t) { return F(t); }, domain.t, scan_step(domain.t, ode_step),
                                conditions::kForcing, ErrorKind::InadmissibleFamily);

  const Interval span = extended(domain.t);
  const GridSpec grid{span.lo, span.hi, ode_step};
  const ScalarFn1 b = solve_lode2(+1, F, start, b0, db0, grid).b();
  const ScalarFn1 mb = cumulative_integral(
      ScalarFn1({[m, b](double t) { return m(t) * b.derivative(t, 1); },
                 [m, b](double t) { return m.derivative(t, 1) * b.derivative(t, 1) + m(t) * b.derivative(t, 2); }}),
      start, grid);
  const ScalarFn1 mcosh = cumulative_integral(
      ScalarFn1({[m](double t) { return m(t) * std::cosh(t); },
                 [m](double t) { return m.derivative(t, 1) * std::cosh(t) + m(t) * std::sinh(t); }}),
      start, grid);
  const ScalarFn1 msinh = cumulative_integral(
      ScalarFn1({[m](double t) { return m(t) * std::sinh(t); },
                 [m](double t) { return m.derivative(t, 1) * std::sinh(t) + m(t) * std::cosh(t); }}),
      start, grid);

  ChartMap map;
  if (kind == E42Kind::I) {
    map = [b, mb, mcosh, msinh](double s, double t) {
      const double x = b(t) * s + mb(t);
      return Vec(kE42, {x, s * std::sinh(t) + mcosh(t), s * std::cosh(t) + msinh(t), x});
    };
  } else {
    map = [b, mb, mcosh, msinh](double s, double t) {
      const double x = b(t) * s + mb(t);
      return Vec(kE42, {x, s * std::cosh(t) + msinh(t), s * std::sinh(t) + mcosh(t), x});
    };
  }
  const bool first = kind == E42Kind::I;
  Immersion surface(first ? "E42-i" : "E42-ii", std::move(map), SpaceForm::flat(), domain,
                    {{"s + m(t) = 0", [m](double s, double t) { return s + m(t); }}});

  // gamma0 = F'/F with A = 1.
  const ScalarFn1 gamma0([F](double t) { return F.derivative(t, 1) / F(t); });
  surface.set_reference_chart(prop32_chart(0, first ? 1 : -1, ScalarFn1::constant(1.0), m, gamma0, domain));
  return Family{std::move(surface), {scan}};
}

Family make_s42_trig(const ScalarFn1& b, const Rect& domain) {
  auto cond = [b](double t) { return b.derivative(t, 2) - b(t); };
  auto scan = scan_nonvanishing(cond, domain.t, scan_step(domain.t, kDefaultOdeStep), conditions::kTrig,
                                ErrorKind::InadmissibleFamily);
  ChartMap map = [b](double s, double t) {
    const double cs = std::cos(s);
    const double x = b(t) * cs;
    return Vec(kE52, {x, cs * std::sinh(t), std::sin(s), cs * std::cosh(t), x});
  };
  Immersion surface("S42-trig", std::move(map), SpaceForm::pseudo_sphere(), domain,
                    {{"cos s = 0", [](double s, double) { return std::cos(s); }}});
  const ScalarFn1 gamma0([b](double t) {
    return (b.derivative(t, 3) - b.derivative(t, 1)) / (b.derivative(t, 2) - b(t));
  });
  surface.set_reference_chart(
      prop32_chart(1, 1, ScalarFn1::constant(1.0), ScalarFn1::constant(0.0), gamma0, domain));
  return Family{std::move(surface), {scan}};
}

Family make_s42_hyp(const ScalarFn1& b, const Rect& domain) {
  auto cond = [b](double t) { return b.derivative(t, 2) + b(t); };
  auto scan = scan_nonvanishing(cond, domain.t, scan_step(domain.t, kDefaultOdeStep), conditions::kHyp,
                                ErrorKind::InadmissibleFamily);
  ChartMap map = [b](double s, double t) {
    const double ch = std::cosh(s);
    const double x = b(t) * ch;
    return Vec(kE52, {x, std::sinh(s), ch * std::cos(t), ch * std::sin(t), x});
  };
  Immersion surface("S42-hyp", std::move(map), SpaceForm::pseudo_sphere(), domain);
  const ScalarFn1 gamma0([b](double t) {
    return (b.derivative(t, 3) + b.derivative(t, 1)) / (b.derivative(t, 2) + b(t));
  });
  surface.set_reference_chart(
      prop32_chart(1, -1, ScalarFn1::constant(1.0), ScalarFn1::constant(0.0), gamma0, domain));
  return Family{std::move(surface), {scan}};
}

Family make_s42_curve(CurveCausal kind, const SphericalCurve& curve, const ScalarFn1& b, int eps_sign,
                      std::optional<double> t0, const Rect& domain, double ode_step) {
  if (curve.causal != kind) {
    throw Error(ErrorKind::WrongCausalType, "make_s42_curve: curve causal type does not match the family");
  }
  if (eps_sign != 1 && eps_sign != -1) throw Error(ErrorKind::InvalidArgument, "make_s42_curve: eps must be +1 or -1");
  const bool timelike = kind == CurveCausal::Timelike;
  const double start = t0.value_or(domain.t.lo);
  const ScalarFn1 kappa = curve.kappa;
  const double h = scan_step(domain.t, ode_step);

  auto kscan = scan_nonvanishing([kappa](double t) { return kappa(t); }, domain.t, h, conditions::kCurvature,
                                 ErrorKind::VanishingCurvature);

  const Interval span = extended(domain.t);
  const ScalarFn1 K = cumulative_integral(
      ScalarFn1({[kappa, b](double t) { return kappa(t) * b.derivative(t, 1); },
                 [kappa, b](double t) {
                   return kappa.derivative(t, 1) * b.derivative(t, 1) + kappa(t) * b.derivative(t, 2);
                 }}),
      start, GridSpec{span.lo, span.hi, ode_step});

  const double sign = timelike ? -1.0 : 1.0;
  auto G = [b, kappa, K, sign](double t) { return b.derivative(t, 2) - kappa(t) * K(t) + sign * b(t); };
  auto gscan = scan_nonvanishing(G, domain.t, h, timelike ? conditions::kCurveTimelike : conditions::kCurveSpacelike,
                                 ErrorKind::InadmissibleFamily);

  const auto alpha = curve.alpha;
  const auto normal = curve.normal;
  ChartMap map;
  std::vector<SingularCondition> singular;
  if (timelike) {
    map = [alpha, normal, b, K](double s, double t) {
      const Vec a = alpha(t), n = normal(t);
      const double cs = std::cos(s), sn = std::sin(s);
      const double x = cs * b(t) + sn * K(t);
      return Vec(kE52, {x, cs * a[0] + sn * n[0], cs * a[1] + sn * n[1], cs * a[2] + sn * n[2], x});
    };
    singular.push_back({"kappa(t) sin s + cos s = 0",
                        [kappa](double s, double t) { return kappa(t) * std::sin(s) + std::cos(s); }});
  } else {
    const double e = eps_sign;
    map = [alpha, normal, b, K, e](double s, double t) {
      const Vec a = alpha(t), n = normal(t);
      const double ch = std::cosh(s), sh = e * std::sinh(s);
      const double x = ch * b(t) + sh * K(t);
      return Vec(kE52, {x, ch * a[0] + sh * n[0], ch * a[1] + sh * n[1], ch * a[2] + sh * n[2], x});
    };
    singular.push_back({"cosh s + eps kappa(t) sinh s = 0",
                        [kappa, e](double s, double t) { return std::cosh(s) + e * kappa(t) * std::sinh(s); }});
  }
  Immersion surface(timelike ? "S42-curve-timelike" : "S42-curve-spacelike", std::move(map),
                    SpaceForm::pseudo_sphere(), domain, std::move(singular));

  // Constant curvature: m is constant, so gamma = (A/phi) gamma0 with A gamma0 = G'/G.
  if (curve.constant_curvature) {
    const double k = kappa(start);
    auto dG = [b, k, sign](double t) { return b.derivative(t, 3) - k * k * b.derivative(t, 1) + sign * b.derivative(t, 1); };
    if (timelike) {
      const double m = -std::atan(k);
      const double A = 1.0 / std::cos(m);
      const ScalarFn1 gamma0([G, dG, A](double t) { return dG(t) / (A * G(t)); });
      surface.set_reference_chart(
          prop32_chart(1, 1, ScalarFn1::constant(A), ScalarFn1::constant(m), gamma0, domain));
    } else if (std::abs(k) < 1.0) {
      const double m = std::atanh(eps_sign * k);
      const double A = 1.0 / std::cosh(m);
      const ScalarFn1 gamma0([G, dG, A](double t) { return dG(t) / (A * G(t)); });
      surface.set_reference_chart(
          prop32_chart(1, -1, ScalarFn1::constant(A), ScalarFn1::constant(m), gamma0, domain));
    }
  }
  return Family{std::move(surface), {kscan, gscan}};
}

Family build_family(const FamilySpec& spec) {
  switch (spec.tag) {
    case FamilyTag::E42_i:
    case FamilyTag::E42_ii:
      if (spec.m.empty() || spec.F.empty()) throw Error(ErrorKind::ConfigError, "E42 families need m and F");
      return make_e42(spec.tag == FamilyTag::E42_i ? E42Kind::I : E42Kind::II, spec.m, spec.F, spec.b0, spec.db0,
                      spec.domain, spec.t0, spec.ode_step);
    case FamilyTag::S42_trig:
      if (spec.b.empty()) throw Error(ErrorKind::ConfigError, "S42-trig needs b");
      return make_s42_trig(spec.b, spec.domain);
    case FamilyTag::S42_hyp:
      if (spec.b.empty()) throw Error(ErrorKind::ConfigError, "S42-hyp needs b");
      return make_s42_hyp(spec.b, spec.domain);
    case FamilyTag::S42_curve_timelike:
    case FamilyTag::S42_curve_spacelike: {
      if (spec.b.empty() || !spec.curve) throw Error(ErrorKind::ConfigError, "curve families need b and a curve");
      const auto kind =
          spec.tag == FamilyTag::S42_curve_timelike ? CurveCausal::Timelike : CurveCausal::Spacelike;
      return make_s42_curve(kind, *spec.curve, spec.b, spec.eps_sign, spec.t0, spec.domain, spec.ode_step);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family tag");
}

Immersion control_flat_plane(const Rect& domain) {
  return Immersion("control-flat-plane", [](double s, double t) { return Vec(kE42, {0.0, 0.0, s, t}); },
                   SpaceForm::flat(), domain);
}

Immersion control_generic_graph(const Rect& domain) {
  return Immersion("control-generic-graph", [](double s, double t) { return Vec(kE42, {0.0, s * t, s, t}); },
                   SpaceForm::flat(), domain,
                   {{"s^2 + t^2 = 1", [](double s, double t) { return s * s + t * t - 1.0; }}});
}

}  // namespace quasimin
