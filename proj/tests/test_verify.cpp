#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "quasimin/families.hpp"
#include "quasimin/verify.hpp"
#include "samples.hpp"

using namespace quasimin;

namespace {
Immersion e42_analytic() {
  return make_e42(E42Kind::I, ScalarFn1::constant(0), ScalarFn1::constant(1), -1, 0, Rect{{0.5, 2}, {-1, 1}}).surface;
}

// The trig parametrization with b = e^t, built by hand so no admissibility check runs.
Immersion trig_exp() {
  const SpaceForm S = SpaceForm::pseudo_sphere();
  ChartMap map = [S](double s, double t) {
    const double b = std::exp(t);
    return Vec(S.ambient(), {b * std::cos(s), std::cos(s) * std::sinh(t), std::sin(s), std::cos(s) * std::cosh(t),
                             b * std::cos(s)});
  };
  return Immersion("trig-exp", map, S, Rect{{0.1, 1}, {0, 1}});
}
}  // namespace

TEST_CASE("grid_points covers the rectangle s-major") {
  auto pts = grid_points(Rect{{0, 1}, {2, 3}}, {4, 5});
  REQUIRE(pts.size() == 20);
  CHECK(pts.front().s == 0.0);
  CHECK(pts.front().t == 2.0);
  CHECK(pts[1].s == 0.0);
  CHECK(pts[1].t == doctest::Approx(2.25));
  CHECK(pts.back().s == 1.0);
  CHECK(pts.back().t == 3.0);
}

TEST_CASE("certify_quasi_minimal examples") {
  auto r = certify_quasi_minimal(e42_analytic(), {20, 20});
  CHECK(r.pass());
  CHECK(r.skipped() == 0);
  REQUIRE(r.property(property::kQuasiMinimal));
  CHECK(r.property(property::kQuasiMinimal)->checked == 400);
  // |H| = |(1,0,0,1)| / (2s)
  for (const auto& p : r.points) CHECK(std::abs(p.h_norm - std::sqrt(2.0) / (2 * p.point.s)) < 1e-7);

  auto plane = certify_quasi_minimal(control_flat_plane(Rect{{-1, 1}, {-1, 1}}), {6, 6});
  CHECK(!plane.pass());
  CHECK(plane.property(property::kQuasiMinimal)->failed == 36);
  for (const auto& p : plane.points) CHECK(p.h_norm < 1e-9);

  auto te = certify_quasi_minimal(trig_exp(), {6, 6});
  CHECK(!te.pass());
  for (const auto& p : te.points) CHECK(p.h_norm < 1e-6);
}

TEST_CASE("certify_positive_relative_nullity examples") {
  auto r = certify_positive_relative_nullity(e42_analytic(), {10, 10});
  CHECK(r.pass());
  CHECK(r.property(property::kNullityOne)->pass);
  for (const auto& p : r.points) CHECK(p.nullity == 1);

  auto plane = certify_positive_relative_nullity(control_flat_plane(Rect{{-1, 1}, {-1, 1}}), {5, 5});
  CHECK(plane.pass());
  const auto* one = plane.property(property::kNullityOne);
  REQUIRE(one);
  CHECK(!one->pass);
  CHECK(plane.property(property::kPositiveNullity)->note.find("degenerate pass") != std::string::npos);
  for (const auto& p : plane.points) CHECK(p.nullity == 2);

  auto graph = certify_positive_relative_nullity(control_generic_graph(Rect{{1, 2}, {1, 2}}), {5, 5});
  CHECK(!graph.pass());
  for (const auto& p : graph.points) CHECK(p.nullity == 0);
}

TEST_CASE("curvature_residuals examples") {
  auto plane = curvature_residuals(control_flat_plane(Rect{{-1, 1}, {-1, 1}}), {0.1, 0.2});
  CHECK(plane.gauss <= 1e-9);
  CHECK(plane.codazzi <= 1e-9);
  CHECK(plane.ricci <= 1e-9);

  auto e = curvature_residuals(e42_analytic(), {1, 0});
  CHECK(e.max() <= 1e-4);

  auto trig = make_s42_trig(qtest::poly({0, 1}), Rect{{0.1, 1}, {0.5, 1.5}}).surface;
  auto t = curvature_residuals(trig, {0.3, 1.0});
  CHECK(t.gauss <= 1e-4);
  CHECK(t.codazzi <= 1e-4);
  CHECK(t.ricci <= 1e-4);
}

TEST_CASE("certify_lemma_frame examples") {
  auto r = certify_lemma_frame(e42_analytic(), {8, 8});
  CHECK(r.pass());
  for (const auto& p : r.points) {
    REQUIRE(p.frame);
    CHECK(p.frame->eps == 1);
    CHECK(p.frame->second_form <= 1e-6);
    CHECK(p.frame->metric <= 1e-6);
    CHECK(p.frame->shape_e3 <= 1e-6);
  }
  auto hyp = certify_lemma_frame(make_s42_hyp(qtest::poly({0, 0, 1}), Rect{{-0.5, 0.5}, {-1, 1}}).surface, {8, 8});
  CHECK(hyp.pass());
  for (const auto& p : hyp.points) CHECK(p.frame->eps == -1);

  auto plane = certify_lemma_frame(control_flat_plane(Rect{{-1, 1}, {-1, 1}}), {4, 4});
  CHECK(!plane.pass());
  for (const auto& p : plane.points) CHECK(!p.frame_error.empty());
}

TEST_CASE("certify_all on every classified sample") {
  for (const auto& f : qtest::classified_samples()) {
    INFO(f.name());
    auto r = certify_all(f, {8, 8});
    CHECK(r.pass());
    for (const auto& pr : r.properties) {
      INFO(pr.name);
      CHECK(pr.pass);
    }
    for (const auto& p : r.points)
      if (!p.skipped) {
        REQUIRE(p.curvature);
        CHECK(p.curvature->max() <= 1e-4);
      }
    if (f.reference_chart()) CHECK(r.property(property::kStructure) != nullptr);
  }
}

TEST_CASE("certify_all negative controls fail for the stated reason") {
  auto plane = certify_all(control_flat_plane(Rect{{-1, 1}, {-1, 1}}), {5, 5});
  CHECK(!plane.pass());
  CHECK(!plane.property(property::kQuasiMinimal)->pass);

  auto graph = certify_all(control_generic_graph(Rect{{1, 2}, {1, 2}}), {5, 5});
  CHECK(!graph.pass());
  CHECK(!graph.property(property::kPositiveNullity)->pass);
}

TEST_CASE("singular points are skipped with a reason") {
  auto trig = make_s42_trig(qtest::poly({0, 1}), Rect{{1.0, M_PI / 2}, {0.5, 1.5}}).surface;
  auto r = certify_quasi_minimal(trig, {5, 5});
  CHECK(r.skipped() == 5);
  for (const auto& p : r.points)
    if (p.skipped) CHECK(!p.skip_reason.empty());
}

TEST_CASE("intrinsic PDE residual separates true charts from perturbed ones") {
  auto g0 = qtest::trig(0.5, 1, 0);
  auto m = qtest::trig(0.2, 2, 1);
  const Rect dom{{1, 2}, {-1, 1}};
  auto ch = prop32_chart(0, 1, ScalarFn1::constant(1), m, g0, dom);
  CHECK(intrinsic_pde_sup(ch, dom, {12, 12}) <= 1e-6);
  auto bad = ch;
  bad.omega = [ch](double s, double t) { return ch.omega(s, t) * 1.01; };
  CHECK(intrinsic_pde_sup(bad, dom, {12, 12}) > 1e-3);
}

TEST_CASE("convergence study on the analytic instance") {
  CHECK(ode_convergence_order(1, ScalarFn1::constant(0), 0, 1, 1, 1) >= 3.0);
  auto st = convergence_study(e42_analytic(), {6, 6}, CertifyOptions{});
  CHECK(st.ode_order >= 3.0);
  CHECK(st.pass);
  CHECK((st.residual_order >= 2.0 || st.residual_at_noise_floor));
  for (int i = 0; i < 3; ++i) CHECK((st.equation_order[i] >= 2.0 || st.at_floor[i]));
}

// ---------------------------------------------------------------------------
// properties

TEST_CASE("property: residuals shrink under step halving where truncation dominates") {
  qtest::Gen g(51);
  auto f = e42_analytic();
  for (int k = 0; k < 6; ++k) {
    ChartPoint p{g.uniform(0.9, 1.6), g.uniform(-0.6, 0.6)};
    auto coarse = curvature_residuals(f, p, 0.05);
    auto fine = curvature_residuals(f, p, 0.025);
    if (coarse.gauss > kResidualNoiseFloor) CHECK(coarse.gauss / fine.gauss >= 4.0);
    CHECK(fine.max() <= 1e-4);
  }
}
