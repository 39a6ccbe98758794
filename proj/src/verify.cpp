#include "quasimin/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

using Christoffel = std::array<Eigen::Matrix2d, 2>;  // [m](i, j) = Gamma^m_ij

// 6th-order central first derivative from samples at -3h..3h (centre unused).
template <class T>
T stencil_d1(const std::array<T, 6>& v, double h) {
  return (1.0 / (60.0 * h)) * ((v[5] - v[0]) + 9.0 * (v[1] - v[4]) + 45.0 * (v[3] - v[2]));
}

template <class Fn>
auto diff_s(Fn&& fn, ChartPoint p, double h) {
  using T = decltype(fn(p.s, p.t));
  return stencil_d1(std::array<T, 6>{fn(p.s - 3 * h, p.t), fn(p.s - 2 * h, p.t), fn(p.s - h, p.t), fn(p.s + h, p.t),
                                     fn(p.s + 2 * h, p.t), fn(p.s + 3 * h, p.t)},
                    h);
}

template <class Fn>
auto diff_t(Fn&& fn, ChartPoint p, double h) {
  using T = decltype(fn(p.s, p.t));
  return stencil_d1(std::array<T, 6>{fn(p.s, p.t - 3 * h), fn(p.s, p.t - 2 * h), fn(p.s, p.t - h), fn(p.s, p.t + h),
                                     fn(p.s, p.t + 2 * h), fn(p.s, p.t + 3 * h)},
                    h);
}

Eigen::Matrix2d metric_at(const ChartMap& map, double s, double t) {
  const Partials pd = partial_derivs(map, {s, t}, 1);
  Eigen::Matrix2d g;
  g << inner(pd.fs, pd.fs), inner(pd.fs, pd.ft), inner(pd.ft, pd.fs), inner(pd.ft, pd.ft);
  return g;
}

Christoffel christoffel(const ChartMap& map, double s, double t, double h) {
  auto g_at = [&map](double a, double b) { return metric_at(map, a, b); };
  const Eigen::Matrix2d g = g_at(s, t);
  if (!(std::abs(g.determinant()) > 1e-12 * std::max(1.0, g.squaredNorm()))) {
    throw Error(ErrorKind::SingularPoint, "degenerate induced metric inside the curvature stencil");
  }
  const std::array<Eigen::Matrix2d, 2> dg{diff_s(g_at, {s, t}, h), diff_t(g_at, {s, t}, h)};
  const Eigen::Matrix2d gi = g.inverse();
  Christoffel out;
  for (int m = 0; m < 2; ++m) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        for (int l = 0; l < 2; ++l) {
          v += gi(m, l) * (dg[static_cast<std::size_t>(i)](l, j) + dg[static_cast<std::size_t>(j)](l, i) -
                           dg[static_cast<std::size_t>(l)](i, j));
        }
        out[static_cast<std::size_t>(m)](i, j) = 0.5 * v;
      }
    }
  }
  return out;
}

/// Component of v normal to the surface (and to the position for quadrics) at (s,t).
Vec normal_projection(const Immersion& f, double s, double t, const Vec& v) {
  const Partials pd = partial_derivs(f.map(), {s, t}, 1);
  if (f.form().is_quadric()) {
    const std::array<Vec, 3> span{pd.fs, pd.ft, pd.f};
    return project_out(v, span);
  }
  const std::array<Vec, 2> span{pd.fs, pd.ft};
  return project_out(v, span);
}

const Vec& alpha_ij(const FundamentalData& d, int i, int j) {
  return d.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

double gamma_at(const Christoffel& c, int m, int i, int j) { return c[static_cast<std::size_t>(m)](i, j); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

struct Mask {
  bool quasi_minimal = false;
  bool nullity = false;
  bool frame = false;
  bool curvature = false;
};

PointRecord evaluate_point(const Immersion& f, ChartPoint p, const Mask& mask, const CertifyOptions& opts) {
  PointRecord rec;
  rec.point = p;
  if (auto reason = f.singular_reason(p, opts.singular_tol)) {
    rec.skipped = true;
    rec.skip_reason = "singular locus: " + *reason;
    return rec;
  }

  std::optional<FundamentalData> d;
  try {
    d = fundamental_data(f, p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularPoint) {
      rec.skipped = true;
      rec.skip_reason = e.what();
    } else {
      rec.failures.push_back(std::string("evaluation: ") + e.what());
    }
    return rec;
  }

  if (mask.quasi_minimal) {
    const CausalCharacter cc = causal_character(d->H, opts.lightlike_tol);
    rec.h_causal = cc;
    rec.h_inner = inner(d->H, d->H);
    rec.h_norm = d->H.euclidean_norm();
    if (cc == CausalCharacter::Zero || rec.h_norm <= opts.nonzero_tol) {
      rec.failures.push_back("quasi_minimal: H = 0");
    } else if (cc != CausalCharacter::Lightlike) {
      rec.failures.push_back(std::string("quasi_minimal: H is ") + to_string(cc));
    }
  }

  if (mask.nullity) {
    rec.nullity = relative_null_space(*d, opts.nullity).dimension;
  }

  if (mask.frame) {
    try {
      const AdaptedFrame fr = adapted_frame(*d, FrameOptions{opts.lightlike_tol, opts.nonzero_tol, opts.nullity});
      FrameResiduals r;
      r.eps = fr.eps;
      const double e = fr.eps;
      r.metric = std::max({std::abs(inner(fr.e1, fr.e1) - e), std::abs(inner(fr.e2, fr.e2) + e),
                           std::abs(inner(fr.e1, fr.e2)), std::abs(inner(fr.e3, fr.e3)),
                           std::abs(inner(fr.e4, fr.e4)), std::abs(inner(fr.e3, fr.e4) + 1.0)});
      const Vec a11 = d->alpha_of(fr.e1_coef, fr.e1_coef);
      const Vec a12 = d->alpha_of(fr.e1_coef, fr.e2_coef);
      const Vec a22 = d->alpha_of(fr.e2_coef, fr.e2_coef);
      r.second_form = std::max({a11.euclidean_norm(), a12.euclidean_norm(), (a22 - fr.e3).euclidean_norm()});
      r.shape_e3 = std::max({std::abs(inner(a11, fr.e3)), std::abs(inner(a12, fr.e3)), std::abs(inner(a22, fr.e3))});
      r.measured = structure_coefficients(f, p, fr);
      if (const auto& ref = f.reference_chart()) {
        r.structure_error = std::max({std::abs(r.measured.omega - ref->omega(p.s, p.t)),
                                      std::abs(r.measured.gamma - ref->gamma(p.s, p.t)),
                                      std::abs(r.measured.phi - ref->phi(p.s, p.t))});
        rec.pde_residual = intrinsic_pde_residual(*ref, p);
      }
      rec.frame = r;
    } catch (const Error& e) {
      rec.frame_error = e.what();
    }
  }

  if (mask.curvature) {
    try {
      rec.curvature = curvature_residuals(f, p, opts.residual_step);
    } catch (const Error& e) {
      rec.failures.push_back(std::string("curvature_equations: ") + e.what());
    }
  }
  return rec;
}

class Tally {
 public:
  Tally(std::string name, double tol) : r_{std::move(name), true, 0, 0, 0.0, ""}, tol_(tol) {}

  void add(std::optional<double> residual, PointRecord& rec, const std::string& why = {}) {
    ++r_.checked;
    if (!residual) {
      fail(rec, why.empty() ? "not computed" : why);
      return;
    }
    r_.max_residual = std::max(r_.max_residual, *residual);
    if (!(*residual <= tol_)) fail(rec, why.empty() ? "residual " + fmt(*residual) : why);
  }
  void fail(PointRecord& rec, const std::string& why) {
    ++r_.failed;
    r_.pass = false;
    rec.failures.push_back(r_.name + ": " + why);
  }
  void count() { ++r_.checked; }
  PropertyResult& result() { return r_; }

 private:
  PropertyResult r_;
  double tol_;
};

CertificationReport run(const Immersion& f, SampleGrid grid, const CertifyOptions& opts, const Mask& mask,
                        bool require_exactly_one) {
  CertificationReport report;
  report.surface = f.name();
  report.space_form = f.form().name();
  report.grid = grid;

  Tally qm(property::kQuasiMinimal, opts.nonzero_tol);
  Tally pos(property::kPositiveNullity, 0.0);
  Tally one(property::kNullityOne, 0.0);
  Tally frame(property::kLemmaFrame, opts.frame_tol);
  Tally structure(property::kStructure, opts.structure_tol);
  Tally curvature(property::kCurvature, opts.residual_tol);
  Tally pde(property::kIntrinsicPde, opts.pde_tol);
  std::size_t degenerate = 0;
  const bool has_ref = f.reference_chart().has_value();

  for (const ChartPoint& p : grid_points(f.domain(), grid)) {
    PointRecord rec = evaluate_point(f, p, mask, opts);
    if (rec.skipped) {
      report.points.push_back(std::move(rec));
      continue;
    }
    const bool evaluated = rec.failures.empty() || rec.failures.front().rfind("evaluation:", 0) != 0;

    if (mask.quasi_minimal) {
      qm.count();
      const bool bad = std::any_of(rec.failures.begin(), rec.failures.end(),
                                   [](const std::string& s) { return s.rfind("quasi_minimal", 0) == 0; });
      if (bad || !evaluated) {
        auto& r = qm.result();
        ++r.failed;
        r.pass = false;
        if (!evaluated) rec.failures.push_back("quasi_minimal: not computed");
      }
      if (rec.h_norm > 0) qm.result().max_residual = std::max(qm.result().max_residual, std::abs(rec.h_inner) / (rec.h_norm * rec.h_norm));
    }
    if (mask.nullity) {
      pos.count();
      one.count();
      if (!rec.nullity || *rec.nullity == 0) {
        ++pos.result().failed;
        pos.result().pass = false;
        rec.failures.push_back("positive_relative_nullity: dimension 0");
      }
      if (!rec.nullity || *rec.nullity != 1) {
        ++one.result().failed;
        one.result().pass = false;
        if (require_exactly_one) {
          rec.failures.push_back("nullity_exactly_one: dimension " + (rec.nullity ? std::to_string(*rec.nullity) : std::string("?")));
        }
      }
      if (rec.nullity && *rec.nullity == 2) ++degenerate;
    }
    if (mask.frame) {
      if (rec.frame) {
        frame.add(std::max({rec.frame->metric, rec.frame->second_form, rec.frame->shape_e3}), rec);
        if (has_ref) {
          structure.add(rec.frame->structure_error, rec);
          pde.add(rec.pde_residual, rec);
        }
      } else {
        frame.add(std::nullopt, rec, rec.frame_error.empty() ? "frame not built" : rec.frame_error);
        if (has_ref) {
          structure.add(std::nullopt, rec, "frame not built");
          pde.add(std::nullopt, rec, "frame not built");
        }
      }
    }
    if (mask.curvature) {
      if (rec.curvature) {
        curvature.add(rec.curvature->max(), rec);
      } else {
        curvature.add(std::nullopt, rec, "not computed");
      }
    }
    report.points.push_back(std::move(rec));
  }

  if (mask.quasi_minimal) report.properties.push_back(qm.result());
  if (mask.nullity) {
    if (degenerate > 0) {
      pos.result().note = "degenerate pass: dimension 2 at " + std::to_string(degenerate) + " point(s)";
    }
    report.properties.push_back(pos.result());
    PropertyResult r = one.result();
    if (!require_exactly_one) r.note = "informational";
    report.properties.push_back(r);
  }
  if (mask.frame) {
    report.properties.push_back(frame.result());
    if (has_ref) {
      report.properties.push_back(structure.result());
      report.properties.push_back(pde.result());
    }
  }
  if (mask.curvature) report.properties.push_back(curvature.result());
  return report;
}

}  // namespace

std::vector<ChartPoint> grid_points(const Rect& domain, SampleGrid grid) {
  if (grid.ns < 1 || grid.nt < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one node per axis");
  if (!std::isfinite(domain.s.width()) || !std::isfinite(domain.t.width())) {
    throw Error(ErrorKind::InvalidArgument, "grid needs a bounded domain");
  }
  auto node = [](Interval iv, int i, int n) {
    return n == 1 ? 0.5 * (iv.lo + iv.hi) : iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<ChartPoint> out;
  out.reserve(static_cast<std::size_t>(grid.ns) * static_cast<std::size_t>(grid.nt));
  for (int i = 0; i < grid.ns; ++i)
    for (int j = 0; j < grid.nt; ++j) out.push_back({node(domain.s, i, grid.ns), node(domain.t, j, grid.nt)});
  return out;
}

double CurvatureResiduals::max() const noexcept { return std::max({gauss, codazzi, ricci}); }

CurvatureResiduals curvature_residuals(const Immersion& f, ChartPoint p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "curvature_residuals: step must be positive");
  const FundamentalData d = fundamental_data(f, p);
  const ChartMap& map = f.map();
  const double c = d.c;

  auto gam = [&map, h](double s, double t) { return christoffel(map, s, t, h); };
  const Christoffel G = gam(p.s, p.t);
  // Derivatives of each Christoffel component.
  std::array<Eigen::Matrix2d, 2> dGs, dGt;
  for (std::size_t m = 0; m < 2; ++m) {
    dGs[m] = diff_s([&](double s, double t) { return gam(s, t)[m]; }, p, h);
    dGt[m] = diff_t([&](double s, double t) { return gam(s, t)[m]; }, p, h);
  }

  CurvatureResiduals out;
  const int S = 0, T = 1;

  // Gauss: R(ds,dt)dk against c(g_tk ds - g_sk dt) + A_{alpha(dt,dk)} ds - A_{alpha(ds,dk)} dt.
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d R;
    for (int m = 0; m < 2; ++m) {
      double v = dGs[static_cast<std::size_t>(m)](T, k) - dGt[static_cast<std::size_t>(m)](S, k);
      for (int l = 0; l < 2; ++l) v += gamma_at(G, l, T, k) * gamma_at(G, m, S, l) - gamma_at(G, l, S, k) * gamma_at(G, m, T, l);
      R(m) = v;
    }
    const Eigen::Matrix2d At = shape_operator(d, alpha_ij(d, T, k));
    const Eigen::Matrix2d As = shape_operator(d, alpha_ij(d, S, k));
    Eigen::Vector2d rhs = c * Eigen::Vector2d(d.g(T, k), -d.g(S, k)) + At.col(S) - As.col(T);
    out.gauss = std::max(out.gauss, d.tangent_vector(R - rhs).euclidean_norm());
  }

  // Codazzi: proj(d_s alpha_tk - d_t alpha_sk) - Gamma^l_sk alpha_tl + Gamma^l_tk alpha_sl.
  {
    const std::array<double, 6> off{-3, -2, -1, 1, 2, 3};
    std::vector<FundamentalData> ns, nt;
    for (double k : off) {
      ns.push_back(fundamental_data(f, {p.s + k * h, p.t}));
      nt.push_back(fundamental_data(f, {p.s, p.t + k * h}));
    }
    auto pick = [](const std::vector<FundamentalData>& v, int i, int j) {
      return std::array<Vec, 6>{alpha_ij(v[0], i, j), alpha_ij(v[1], i, j), alpha_ij(v[2], i, j),
                                alpha_ij(v[3], i, j), alpha_ij(v[4], i, j), alpha_ij(v[5], i, j)};
    };
    for (int k = 0; k < 2; ++k) {
      const Vec ds_atk = stencil_d1(pick(ns, T, k), h);
      const Vec dt_ask = stencil_d1(pick(nt, S, k), h);
      Vec r = d.normal_part(ds_atk - dt_ask);
      for (int l = 0; l < 2; ++l) r += gamma_at(G, l, T, k) * alpha_ij(d, S, l) - gamma_at(G, l, S, k) * alpha_ij(d, T, l);
      out.codazzi = std::max(out.codazzi, r.euclidean_norm());
    }
  }

  // Ricci: R_perp(ds,dt) xi against alpha(ds, A_xi dt) - alpha(A_xi ds, dt), xi extended by projection.
  for (const Vec& E : d.normal) {
    auto nu = [&f, &E](double s, double t) { return normal_projection(f, s, t, E); };
    auto W_s = [&](double s, double t) { return normal_projection(f, s, t, diff_s(nu, {s, t}, h)); };
    auto W_t = [&](double s, double t) { return normal_projection(f, s, t, diff_t(nu, {s, t}, h)); };
    const Vec Rperp = d.normal_part(diff_s(W_t, p, h) - diff_t(W_s, p, h));
    const Eigen::Matrix2d A = shape_operator(d, E);
    const Vec rhs = d.alpha_of(Eigen::Vector2d(1, 0), A.col(T)) - d.alpha_of(A.col(S), Eigen::Vector2d(0, 1));
    out.ricci = std::max(out.ricci, (Rperp - rhs).euclidean_norm());
  }
  return out;
}

std::size_t CertificationReport::skipped() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const PointRecord& r) { return r.skipped; }));
}

bool CertificationReport::pass() const {
  for (const auto& p : properties) {
    if (p.note == "informational") continue;
    if (!p.pass) return false;
  }
  if (convergence && !convergence->pass) return false;
  return !properties.empty();
}

const PropertyResult* CertificationReport::property(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

CertificationReport certify_quasi_minimal(const Immersion& f, SampleGrid grid, const CertifyOptions& opts) {
  return run(f, grid, opts, Mask{true, false, false, false}, false);
}

CertificationReport certify_positive_relative_nullity(const Immersion& f, SampleGrid grid, const CertifyOptions& opts) {
  return run(f, grid, opts, Mask{false, true, false, false}, false);
}

CertificationReport certify_lemma_frame(const Immersion& f, SampleGrid grid, const CertifyOptions& opts) {
  return run(f, grid, opts, Mask{false, false, true, false}, false);
}

CertificationReport certify_curvature_equations(const Immersion& f, SampleGrid grid, const CertifyOptions& opts) {
  return run(f, grid, opts, Mask{false, false, false, true}, false);
}

CertificationReport certify_all(const Immersion& f, SampleGrid grid, const CertifyOptions& opts) {
  return run(f, grid, opts, Mask{true, true, true, true}, true);
}

double intrinsic_pde_residual(const CoefficientChart& chart, ChartPoint p, double h) {
  auto along_s = [p](const std::function<double(double, double)>& fn) {
    return std::function<double(double)>([&fn, p](double s) { return fn(s, p.t); });
  };
  auto along_t = [p](const std::function<double(double, double)>& fn) {
    return std::function<double(double)>([&fn, p](double t) { return fn(p.s, t); });
  };
  const double phi = chart.phi(p.s, p.t);
  const double omega = chart.omega(p.s, p.t);
  const double gamma = chart.gamma(p.s, p.t);
  const double phi_s = central_d1(along_s(chart.phi), p.s, h);
  const double omega_s = central_d1(along_s(chart.omega), p.s, h);
  const double omega_t = central_d1(along_t(chart.omega), p.t, h);
  const double gamma_s = central_d1(along_s(chart.gamma), p.s, h);
  const double ec = static_cast<double>(chart.eps * chart.c);
  return std::max({std::abs(phi_s + phi * omega), std::abs(omega_s - omega * omega - ec),
                   std::abs(gamma_s - omega * gamma - omega_t / phi)});
}

double intrinsic_pde_sup(const CoefficientChart& chart, const Rect& domain, SampleGrid grid, double h) {
  double sup = 0.0;
  for (const ChartPoint& p : grid_points(domain, grid)) sup = std::max(sup, intrinsic_pde_residual(chart, p, h));
  return sup;
}

double ode_convergence_order(int sigma, const ScalarFn1& rhs, double t0, double b0, double db0, double t1, double h0) {
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  std::array<ScalarFn1, 3> runs;
  for (int k = 0; k < 3; ++k) {
    const double h = h0 / static_cast<double>(1 << k);
    runs[static_cast<std::size_t>(k)] = solve_lode2(sigma, rhs, t0, b0, db0, GridSpec{lo, hi, h}).b();
  }
  const auto n = static_cast<int>(std::floor((hi - lo) / h0 + 1e-9));
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + h0 * i;
    d1 = std::max(d1, std::abs(runs[0](t) - runs[1](t)));
    d2 = std::max(d2, std::abs(runs[1](t) - runs[2](t)));
  }
  if (d1 <= 1e-13 || d2 <= 1e-15) return std::numeric_limits<double>::infinity();
  return std::log2(d1 / d2);
}

ConvergenceStudy convergence_study(const Immersion& f, SampleGrid grid, const CertifyOptions& opts,
                                   const std::optional<OdeProblem>& ode) {
  ConvergenceStudy out;
  out.residual_step = opts.convergence_step;

  double order = std::numeric_limits<double>::infinity();
  if (ode) {
    order = ode_convergence_order(ode->sigma, ode->rhs, ode->t0, ode->b0, ode->db0, ode->t1);
    out.ode_problem = ode->label;
  }
  if (!std::isfinite(order)) {
    // The family's own equation is solved exactly (e.g. a constant solution); use e^t instead.
    order = ode_convergence_order(1, ScalarFn1::constant(0.0), 0.0, 1.0, 1.0, 1.0);
    out.ode_problem = "b''=b, b(0)=1, b'(0)=1 on [0,1]";
  }
  out.ode_order = order;

  for (const ChartPoint& p : grid_points(f.domain(), grid)) {
    if (f.singular_reason(p, opts.singular_tol)) continue;
    CurvatureResiduals a, b;
    try {
      a = curvature_residuals(f, p, opts.convergence_step);
      b = curvature_residuals(f, p, 0.5 * opts.convergence_step);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SingularPoint) continue;
      throw;
    }
    out.coarse.gauss = std::max(out.coarse.gauss, a.gauss);
    out.coarse.codazzi = std::max(out.coarse.codazzi, a.codazzi);
    out.coarse.ricci = std::max(out.coarse.ricci, a.ricci);
    out.fine.gauss = std::max(out.fine.gauss, b.gauss);
    out.fine.codazzi = std::max(out.fine.codazzi, b.codazzi);
    out.fine.ricci = std::max(out.fine.ricci, b.ricci);
  }

  // Worst order over the equations whose residuals are above the noise floor.
  const std::array<std::pair<double, double>, 3> pairs{
      {{out.coarse.gauss, out.fine.gauss}, {out.coarse.codazzi, out.fine.codazzi}, {out.coarse.ricci, out.fine.ricci}}};
  double worst = std::numeric_limits<double>::infinity();
  bool all_floor = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [c, fi] = pairs[i];
    out.equation_order[i] = fi > 0 ? std::log2(c / fi) : std::numeric_limits<double>::infinity();
    out.at_floor[i] = c <= kResidualNoiseFloor && fi <= kResidualNoiseFloor;
    if (out.at_floor[i]) continue;
    all_floor = false;
    worst = std::min(worst, out.equation_order[i]);
  }
  out.residual_at_noise_floor = all_floor;
  out.worst_equation_order = worst;
  const double cmax = out.coarse.max(), fmax = out.fine.max();
  out.residual_order = fmax > 0 ? std::log2(cmax / fmax) : std::numeric_limits<double>::infinity();
  const bool combined = (cmax <= kResidualNoiseFloor && fmax <= kResidualNoiseFloor) || out.residual_order >= 2.0;
  out.pass = out.ode_order >= 3.0 && combined && (all_floor || worst >= 2.0);
  return out;
}

}  // namespace quasimin
