#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "quasimin/error.hpp"
#include "quasimin/families.hpp"
#include "quasimin/immersion.hpp"
#include "samples.hpp"

using namespace quasimin;

namespace {
Immersion e42_analytic(E42Kind kind = E42Kind::I) {
  return make_e42(kind, ScalarFn1::constant(0), ScalarFn1::constant(1), -1, 0, Rect{{0.5, 2.5}, {-1, 1}}).surface;
}

double dist(const Vec& v, std::initializer_list<double> want) {
  double m = 0;
  int i = 0;
  for (double w : want) m = std::max(m, std::abs(v[i++] - w));
  return m;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no throw");
  return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("fundamental_data: flat plane") {
  auto plane = control_flat_plane(Rect{{-1, 1}, {-1, 1}});
  auto d = fundamental_data(plane, {0.2, 0.3});
  for (const auto& row : d.alpha)
    for (const auto& a : row) CHECK(a.max_abs() < 1e-9);
  CHECK(d.H.max_abs() < 1e-9);
  CHECK(d.g(0, 0) == doctest::Approx(1.0));
  CHECK(d.g(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("fundamental_data: E42 family (i), m = 0, F = 1, b = -1") {
  auto f = e42_analytic();
  // f = (-s, s sinh t, s cosh t, -s)
  CHECK(dist(f(1.3, 0.4), {-1.3, 1.3 * std::sinh(0.4), 1.3 * std::cosh(0.4), -1.3}) < 1e-12);
  auto d = fundamental_data(f, {1, 0});
  CHECK(dist(d.alpha_tt(), {1, 0, 0, 1}) < 1e-7);
  CHECK(dist(d.alpha_ss(), {0, 0, 0, 0}) < 1e-7);
  CHECK(dist(d.alpha_st(), {0, 0, 0, 0}) < 1e-7);
  CHECK(dist(d.H, {-0.5, 0, 0, -0.5}) < 1e-7);
  CHECK(d.g(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.g(1, 1) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("fundamental_data: degenerate metric is a singular point") {
  // (0, st, s, t): g = [[1 - t^2, -st], [-st, 1 - s^2]], det = 1 - s^2 - t^2
  auto f = control_generic_graph(Rect{{-2, 2}, {-2, 2}});
  CHECK(kind_of([&] { (void)fundamental_data(f, {std::sqrt(0.5), std::sqrt(0.5)}); }) == ErrorKind::SingularPoint);
}

TEST_CASE("trig family b = t at (0,1): H lightlike along (1,0,0,0,1)") {
  auto f = make_s42_trig(qtest::poly({0, 1}), Rect{{-0.5, 0.5}, {0.5, 1.5}}).surface;
  auto d = fundamental_data(f, {0, 1});
  CHECK(causal_character(d.H, 1e-6) == CausalCharacter::Lightlike);
  CHECK(std::abs(d.H[0] - d.H[4]) < 1e-7);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(d.H[i]) < 1e-7);
  // |H| along (1,0,0,0,1): (b'' - b) / (2 cos s) = 1/2 per component in magnitude
  CHECK(std::abs(std::abs(d.H[0]) - 0.5) < 1e-6);
}

TEST_CASE("relative_null_space examples") {
  auto plane = control_flat_plane(Rect{{-1, 1}, {-1, 1}});
  CHECK(relative_null_space(plane, {0, 0}).dimension == 2);

  auto ns = relative_null_space(e42_analytic(), {1, 0});
  REQUIRE(ns.dimension == 1);
  CHECK(std::abs(ns.basis[0].y()) < 1e-7);
  CHECK(std::abs(std::abs(ns.basis[0].x()) - 1.0) < 1e-7);

  auto graph = control_generic_graph(Rect{{0.5, 2}, {0.5, 2}});
  CHECK(relative_null_space(graph, {1, 1}).dimension == 0);
}

TEST_CASE("adapted_frame examples") {
  auto f = e42_analytic();
  auto fr = adapted_frame(f, {1, 0});
  CHECK(fr.eps == 1);
  CHECK(std::abs(fr.e1_coef.y()) < 1e-7);
  CHECK(dist(fr.e3, {1, 0, 0, 1}) < 1e-7);
  CHECK(std::abs(inner(fr.e3, fr.e4) + 1) < 1e-9);

  auto fr2 = adapted_frame(f, {2, 0});
  CHECK(dist(fr2.e3, {0.5, 0, 0, 0.5}) < 1e-7);

  auto hyp = make_s42_hyp(qtest::poly({0, 0, 1}), Rect{{-0.5, 0.5}, {-1, 1}}).surface;
  auto fh = adapted_frame(hyp, {0, 0});
  CHECK(fh.eps == -1);
  CHECK(inner(fh.e1, fh.e1) == doctest::Approx(-1.0).epsilon(1e-9));

  auto f2 = e42_analytic(E42Kind::II);
  CHECK(adapted_frame(f2, {1, 0}).eps == -1);
}

TEST_CASE("adapted_frame errors") {
  auto plane = control_flat_plane(Rect{{-1, 1}, {-1, 1}});
  CHECK(kind_of([&] { (void)adapted_frame(plane, {0, 0}); }) == ErrorKind::NotQuasiMinimal);
  auto graph = control_generic_graph(Rect{{0.5, 2}, {0.5, 2}});
  const auto k = kind_of([&] { (void)adapted_frame(graph, {1, 1}); });
  CHECK((k == ErrorKind::NotQuasiMinimal || k == ErrorKind::NullityNotOne));
}

TEST_CASE("structure_coefficients examples") {
  auto f = e42_analytic();
  auto sc = structure_coefficients(f, {1, 0}, adapted_frame(f, {1, 0}));
  CHECK(sc.omega == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(std::abs(sc.phi) == doctest::Approx(1.0).epsilon(1e-5));
  auto sc2 = structure_coefficients(f, {2, 0.3}, adapted_frame(f, {2, 0.3}));
  CHECK(std::abs(sc2.phi) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(sc2.omega == doctest::Approx(-0.5).epsilon(1e-5));
}

TEST_CASE("shape operator is dual to alpha") {
  auto f = e42_analytic();
  auto d = fundamental_data(f, {1.5, 0.2});
  Vec xi(f.form().ambient(), {0.3, -1, 2, 0.5});
  auto A = shape_operator(d, xi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d X = Eigen::Vector2d::Unit(i), Y = Eigen::Vector2d::Unit(j);
      const double lhs = (A * X).dot(d.g * Y);
      CHECK(std::abs(lhs - inner(d.alpha[i][j], xi)) < 1e-9);
    }
}

// ---------------------------------------------------------------------------
// properties over the classified samples

TEST_CASE("property: tangency and trace identity") {
  qtest::Gen g(31);
  for (const auto& f : qtest::classified_samples()) {
    const auto& dom = f.domain();
    for (int k = 0; k < 30; ++k) {
      ChartPoint p{g.uniform(dom.s.lo, dom.s.hi), g.uniform(dom.t.lo, dom.t.hi)};
      if (f.singular_reason(p, 1e-3)) continue;
      auto d = fundamental_data(f, p);
      const double scale = std::max({1.0, d.tangent[0].euclidean_norm(), d.tangent[1].euclidean_norm()});
      Vec H(f.form().ambient());
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          H += 0.5 * d.g_inv(i, j) * d.alpha[i][j];
          for (const auto& tv : d.tangent) CHECK(std::abs(inner(d.alpha[i][j], tv)) <= 1e-7 * scale);
        }
      CHECK((H - d.H).max_abs() <= 1e-9);
    }
  }
}

TEST_CASE("property: classified families are quasi-minimal with nullity one and the frame holds") {
  qtest::Gen g(32);
  for (const auto& f : qtest::classified_samples()) {
    INFO(f.name());
    const auto& dom = f.domain();
    int used = 0;
    while (used < 100) {
      ChartPoint p{g.uniform(dom.s.lo, dom.s.hi), g.uniform(dom.t.lo, dom.t.hi)};
      if (f.singular_reason(p, 1e-3)) continue;
      ++used;
      auto d = fundamental_data(f, p);
      CHECK(causal_character(d.H, 1e-6) == CausalCharacter::Lightlike);
      CHECK(d.H.euclidean_norm() > 1e-6);
      CHECK(relative_null_space(d).dimension == 1);
      auto fr = adapted_frame(d);
      CHECK((d.alpha_of(fr.e2_coef, fr.e2_coef) - fr.e3).max_abs() <= 1e-6);
      CHECK(d.alpha_of(fr.e1_coef, fr.e1_coef).max_abs() <= 1e-6);
      CHECK(d.alpha_of(fr.e1_coef, fr.e2_coef).max_abs() <= 1e-6);
      CHECK(shape_operator(d, fr.e3).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("property: measured structure coefficients match the closed forms") {
  qtest::Gen g(33);
  for (const auto& f : qtest::classified_samples()) {
    if (!f.reference_chart()) continue;
    INFO(f.name());
    const auto& ref = *f.reference_chart();
    const auto& dom = f.domain();
    for (int k = 0; k < 15; ++k) {
      // stay off the boundary so the frame stencil remains in the domain
      ChartPoint p{g.uniform(dom.s.lo + 0.05, dom.s.hi - 0.05), g.uniform(dom.t.lo + 0.05, dom.t.hi - 0.05)};
      if (f.singular_reason(p, 1e-3)) continue;
      auto fr = adapted_frame(f, p);
      auto sc = structure_coefficients(f, p, fr);
      CHECK(fr.eps == ref.eps);
      CHECK(std::abs(sc.omega - ref.omega(p.s, p.t)) <= 1e-5);
      CHECK(std::abs(sc.gamma - ref.gamma(p.s, p.t)) <= 1e-5);
      CHECK(std::abs(sc.phi - ref.phi(p.s, p.t)) <= 1e-5);
    }
  }
}
