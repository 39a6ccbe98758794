// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "gen.hpp"
#include "quasimin/config.hpp"
#include "quasimin/error.hpp"
#include "quasimin/families.hpp"
#include "quasimin/immersion.hpp"
#include "quasimin/report_io.hpp"
#include "quasimin/verify.hpp"

using namespace quasimin;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kClassified{
    "e42-i-analytic.json",          "e42-i-varying.json",           "e42-ii-analytic.json",
    "e42-ii-varying.json",          "s42-trig-linear.json",         "s42-trig-cos.json",
    "s42-hyp-quadratic.json",       "s42-hyp-exp.json",             "s42-curve-timelike-const.json",
    "s42-curve-timelike-linear.json", "s42-curve-spacelike-const.json", "s42-curve-spacelike-quadratic.json"};

std::string config_path(const std::string& name) { return std::string(QUASIMIN_CONFIG_DIR) + "/" + name; }

/// Collects failure details for one criterion.
struct Criterion {
  int number;
  std::string title;
  std::vector<std::string> problems;
  std::string summary;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  bool report() const {
    const bool pass = problems.empty();
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
    if (!summary.empty()) std::cout << " [" << summary << "]";
    std::cout << "\n";
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) std::cout << "    " << problems[i] << "\n";
    if (problems.size() > 10) std::cout << "    ... " << problems.size() - 10 << " more\n";
    return pass;
  }
};

std::string fmt(double x) { return format_double(x); }

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "quasimin");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "quasimin_acceptance";
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------

struct ConfigRun {
  std::string name;
  CertificationReport report;
  ConvergenceStudy study;
  double certify_seconds = 0;
};

std::vector<ConfigRun> run_classified() {
  std::vector<ConfigRun> runs;
  for (const auto& name : kClassified) {
    ConfigRun r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = load_config(config_path(name));
    auto built = build_surface(cfg);
    r.report = certify_all(built.surface, cfg.grid, cfg.options);
    r.certify_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.study = convergence_study(built.surface, cfg.grid, cfg.options, built.ode);
    runs.push_back(std::move(r));
  }
  return runs;
}

bool criterion1(const std::vector<ConfigRun>& runs) {
  Criterion c{1, "classified families certify on 20x20 grids", {}, {}};
  double worst_time = 0;
  std::size_t points = 0;
  for (const auto& r : runs) {
    const auto& rep = r.report;
    c.require(rep.grid.ns == 20 && rep.grid.nt == 20, r.name + ": grid is not 20x20");
    c.require(rep.skipped() == 0, r.name + ": " + std::to_string(rep.skipped()) + " skipped points");
    for (const char* prop : {property::kQuasiMinimal, property::kPositiveNullity, property::kNullityOne,
                             property::kLemmaFrame}) {
      const auto* p = rep.property(prop);
      c.require(p && p->pass, r.name + ": " + prop + " failed");
    }
    for (const auto& pt : rep.points) {
      if (pt.skipped) continue;
      ++points;
      c.require(pt.h_causal == CausalCharacter::Lightlike, r.name + ": H not lightlike");
      c.require(pt.h_norm > 1e-6, r.name + ": |H| <= 1e-6");
      c.require(pt.nullity == 1, r.name + ": nullity != 1");
      c.require(pt.frame && pt.frame->metric <= 1e-6 && pt.frame->second_form <= 1e-6 && pt.frame->shape_e3 <= 1e-6,
                r.name + ": frame relation above 1e-6");
    }
    worst_time = std::max(worst_time, r.certify_seconds);
    c.require(r.certify_seconds < 10.0, r.name + ": runtime " + fmt(r.certify_seconds) + " s");
  }
  c.require(runs.size() == 12, "expected 12 configs");
  c.summary = std::to_string(runs.size()) + " configs, " + std::to_string(points) + " points, slowest " +
              fmt(std::round(worst_time * 100) / 100) + " s";
  return c.report();
}

bool criterion2(const std::vector<ConfigRun>& runs) {
  Criterion c{2, "Gauss, Codazzi, Ricci residuals <= 1e-4 and step-halving order", {}, {}};
  double worst = 0;
  double worst_order = std::numeric_limits<double>::infinity();
  for (const auto& r : runs) {
    for (const auto& pt : r.report.points) {
      if (pt.skipped) continue;
      if (!pt.curvature) {
        c.require(false, r.name + ": missing curvature residuals");
        continue;
      }
      worst = std::max(worst, pt.curvature->max());
      c.require(pt.curvature->max() <= 1e-4, r.name + ": residual " + fmt(pt.curvature->max()));
    }
    const auto& st = r.study;
    const char* names[3] = {"gauss", "codazzi", "ricci"};
    for (int i = 0; i < 3; ++i) {
      const bool ok = st.at_floor[i] || st.equation_order[i] >= 2.0;
      c.require(ok, r.name + ": " + names[i] + " ratio 2^" + fmt(st.equation_order[i]) + " < 4");
      if (!st.at_floor[i]) worst_order = std::min(worst_order, st.equation_order[i]);
    }
    c.require(st.pass, r.name + ": convergence study failed");
  }
  c.summary = "max residual " + fmt(worst) + ", smallest order above noise floor " + fmt(worst_order);
  return c.report();
}

bool criterion3() {
  Criterion c{3, "intrinsic PDE suite on random prop32 charts (20 draws x 3 blocks, 50x50)", {}, {}};
  qtest::Gen g(20261019);
  double worst = 0;
  for (int draw = 0; draw < 20; ++draw) {
    auto m = g.trig_poly(2, 0.08);       // |m| <= 0.4
    auto gamma0 = g.trig_poly(3, 0.5);
    auto A0 = g.trig_poly(2, 0.1);       // |A0| <= 0.5
    std::vector<ScalarFn1::Fn> ad;
    for (int k = 0; k <= 4; ++k) ad.push_back([A0, k](double t) { return (k == 0 ? 1.5 : 0.0) + A0.derivative(t, k); });
    ScalarFn1 A(std::move(ad));
    struct Block {
      int c, eps;
      Rect dom;
    };
    const int e = g.integer(0, 1) ? 1 : -1;
    const Block blocks[3] = {{0, e, Rect{{1, 2}, {-1, 1}}},
                             {e, e, Rect{{-0.5, 0.5}, {-1, 1}}},
                             {-e, e, Rect{{-0.5, 0.5}, {-1, 1}}}};
    for (const auto& b : blocks) {
      auto chart = prop32_chart(b.c, b.eps, A, m, gamma0, b.dom);
      const double sup = intrinsic_pde_sup(chart, b.dom, {50, 50});
      worst = std::max(worst, sup);
      c.require(sup <= 1e-6, "draw " + std::to_string(draw) + " c=" + std::to_string(b.c) + " eps=" +
                                 std::to_string(b.eps) + ": sup " + fmt(sup));
    }
  }
  c.summary = "worst sup " + fmt(worst);
  return c.report();
}

double rel(const Vec& got, const Vec& want) { return (got - want).euclidean_norm() / want.euclidean_norm(); }

bool criterion4() {
  Criterion c{4, "analytic instances reproduce their closed forms", {}, {}};
  const Rect dom{{0.5, 2}, {-1, 1}};
  auto e42 = make_e42(E42Kind::I, ScalarFn1::constant(0), ScalarFn1::constant(1), -1, 0, dom).surface;
  const IndefiniteSpace& sp = e42.form().ambient();
  double w1 = 0;
  for (const auto& p : grid_points(dom, {10, 10})) {
    auto d = fundamental_data(e42, p);
    const double s = p.s;
    const double gm = std::max({std::abs(d.g(0, 0) - 1), std::abs(d.g(0, 1)) / (s), std::abs(d.g(1, 1) + s * s) / (s * s)});
    const double at = rel(d.alpha_tt(), Vec(sp, {s, 0, 0, s}));
    const double h = rel(d.H, Vec(sp, {-1 / (2 * s), 0, 0, -1 / (2 * s)}));
    w1 = std::max({w1, gm, at, h});
    c.require(gm <= 1e-7 && at <= 1e-7 && h <= 1e-7,
              "E42 at (" + fmt(s) + "," + fmt(p.t) + "): metric " + fmt(gm) + " alpha_tt " + fmt(at) + " H " + fmt(h));
  }
  const Rect tdom{{0.1, 1.2}, {0.5, 1.5}};
  auto trig = make_s42_trig(qtest::poly({0, 1}), tdom).surface;
  double w2 = 0;
  for (const auto& p : grid_points(tdom, {10, 10})) {
    auto d = fundamental_data(trig, p);
    const Vec C0(trig.form().ambient(), {1, 0, 0, 0, 1});
    const double mag = std::abs(p.t) / (2 * std::abs(std::cos(p.s)));
    // H = lambda C0 with |lambda| = |t| / (2 |cos s|)
    const double lambda = d.H[0];
    const double dir = (d.H - lambda * C0).euclidean_norm() / d.H.euclidean_norm();
    const double r = std::abs(std::abs(lambda) - mag) / mag;
    w2 = std::max({w2, dir, r});
    c.require(dir <= 1e-5 && r <= 1e-5, "trig at (" + fmt(p.s) + "," + fmt(p.t) + "): direction " + fmt(dir) +
                                            " magnitude " + fmt(r));
  }
  c.summary = "E42 worst relative " + fmt(w1) + ", trig worst relative " + fmt(w2);
  return c.report();
}

bool criterion5() {
  Criterion c{5, "negative controls", {}, {}};
  const fs::path rep = scratch() / "controls.json";

  auto plane = run_cli({"certify", "--config", config_path("control-flat-plane.json"), "--report", rep.string()});
  c.require(plane.code == 1, "flat plane exit " + std::to_string(plane.code));
  c.require(plane.out.find("FAIL quasi_minimal") != std::string::npos, "flat plane: no quasi_minimal failure line");
  {
    auto doc = json::parse(slurp(rep));
    for (const auto& p : doc["payload"]["points"])
      c.require(p.contains("H_norm") && p["H_norm"].get<double>() <= 1e-9, "flat plane: H != 0");
  }

  auto te = run_cli({"generate", "--config", config_path("inadmissible-trig-exp.json"), "--out",
                     (scratch() / "te.csv").string()});
  c.require(te.code == 2, "trig b=e^t exit " + std::to_string(te.code));
  c.require(te.err.find("InadmissibleFamily: condition \"b''-b != 0\"") != std::string::npos,
            "trig b=e^t message: " + te.err);

  auto hs = run_cli({"certify", "--config", config_path("inadmissible-hyp-sin.json"), "--report",
                     (scratch() / "hs.json").string()});
  c.require(hs.code == 2, "hyp b=sin exit " + std::to_string(hs.code));
  c.require(hs.err.find("InadmissibleFamily: condition \"b''+b != 0\"") != std::string::npos,
            "hyp b=sin message: " + hs.err);

  auto gg = run_cli({"certify", "--config", config_path("control-generic-graph.json"), "--report", rep.string()});
  c.require(gg.code == 1, "generic graph exit " + std::to_string(gg.code));
  {
    auto doc = json::parse(slurp(rep));
    std::size_t n = 0;
    for (const auto& p : doc["payload"]["points"]) {
      ++n;
      c.require(p.contains("nullity") && p["nullity"] == 0, "generic graph: nullity != 0");
    }
    c.require(n > 0, "generic graph: no points");
  }
  c.summary = "exit codes 1, 2, 2, 1";
  return c.report();
}

bool criterion6() {
  Criterion c{6, "Frenet suite on S2_1 test curves", {}, {}};
  // closed-form oracle: kappa = sqrt(1-a^2)/a for the timelike circle, sqrt(A^2-1)/A for the spacelike one
  const double k_time = 4.0 / 3.0;
  const double k_space = 0.70710678118654752;
  auto tl = [](double t) {
    return Vec(minkowski3(), {0.6 * std::sinh(t / 0.6), 0.8, 0.6 * std::cosh(t / 0.6)});
  };
  const double A = std::sqrt(2.0);
  auto sl = [A](double t) { return Vec(minkowski3(), {1.0, A * std::cos(t / A), A * std::sin(t / A)}); };
  double worst = 0;
  try {
    auto ct = frenet_apparatus(tl, CurveCausal::Timelike, {-1, 1});
    auto cs = frenet_apparatus(sl, CurveCausal::Spacelike, {-1, 1});
    for (int i = 0; i <= 20; ++i) {
      const double t = -1 + 0.1 * i;
      worst = std::max({worst, std::abs(ct.kappa(t) - k_time), std::abs(cs.kappa(t) - k_space)});
    }
    c.require(worst <= 1e-7, "kappa error " + fmt(worst));
  } catch (const Error& e) {
    c.require(false, std::string("unexpected error: ") + e.what());
  }
  bool vanished = false;
  try {
    (void)frenet_apparatus([](double t) { return Vec(minkowski3(), {std::sinh(t), 0, std::cosh(t)}); },
                           CurveCausal::Timelike, {-1, 1});
  } catch (const Error& e) {
    vanished = e.kind() == ErrorKind::VanishingCurvature;
  }
  c.require(vanished, "great circle did not raise VanishingCurvature");
  c.summary = "kappa error " + fmt(worst);
  return c.report();
}

bool criterion7() {
  Criterion c{7, "numerics suite", {}, {}};
  auto sol = solve_lode2(1, ScalarFn1::constant(0), 0, 1, 1, {0, 1, 1e-3});
  double err = 0;
  for (int i = 0; i <= 1000; ++i) err = std::max(err, std::abs(sol.b()(i * 1e-3) - std::exp(i * 1e-3)));
  c.require(err <= 1e-8, "e^t error " + fmt(err));

  // observed order against the exact solution at h = 0.1, 0.05, 0.025
  std::vector<double> errs;
  for (double h : {0.1, 0.05, 0.025}) {
    auto s = solve_lode2(1, ScalarFn1::constant(0), 0, 1, 1, {0, 1, h});
    double e = 0;
    for (std::size_t i = 0; i < s.table().size(); ++i) {
      const double t = s.table().node(i);
      if (t >= -1e-12 && t <= 1 + 1e-12) e = std::max(e, std::abs(s.table().node_value(i) - std::exp(t)));
    }
    errs.push_back(e);
  }
  const double order = std::log2(errs[1] / errs[2]);
  c.require(order >= 3.0 && std::log2(errs[0] / errs[1]) >= 3.0, "observed order " + fmt(order));
  const double self_order = ode_convergence_order(1, ScalarFn1::constant(0), 0, 1, 1, 1);
  c.require(self_order >= 3.0, "self-convergence order " + fmt(self_order));

  std::vector<ScalarFn1::Fn> cd{[](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); }};
  auto I = cumulative_integral(ScalarFn1(cd), 0, {0, M_PI, 1e-3});
  double qerr = 0;
  for (int i = 0; i <= 3141; ++i) qerr = std::max(qerr, std::abs(I(i * 1e-3) - std::sin(i * 1e-3)));
  c.require(qerr <= 1e-10, "sin error " + fmt(qerr));
  c.summary = "e^t error " + fmt(err) + ", order " + fmt(std::round(order * 100) / 100) + ", sin error " + fmt(qerr);
  return c.report();
}

bool criterion8() {
  Criterion c{8, "generate and certify payloads are byte-identical across runs", {}, {}};
  std::size_t compared = 0;
  for (const char* name : {"e42-i-varying.json", "s42-curve-spacelike-quadratic.json", "s42-trig-cos.json"}) {
    std::string csv[2], side[2], report[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = scratch() / ("det" + std::to_string(k) + ".csv");
      const fs::path rep = scratch() / ("det" + std::to_string(k) + ".json");
      auto g = run_cli({"generate", "--config", config_path(name), "--out", out.string()});
      auto r = run_cli({"certify", "--config", config_path(name), "--report", rep.string()});
      c.require(g.code == 0 && r.code == 0, std::string(name) + ": run failed");
      csv[k] = slurp(out);
      side[k] = json::parse(slurp(out.string() + ".json"))["payload"].dump();
      report[k] = json::parse(slurp(rep))["payload"].dump();
    }
    c.require(csv[0] == csv[1], std::string(name) + ": CSV differs");
    c.require(side[0] == side[1], std::string(name) + ": sidecar payload differs");
    c.require(report[0] == report[1], std::string(name) + ": report payload differs");
    compared += 3;
  }
  c.summary = std::to_string(compared) + " artifact pairs";
  return c.report();
}

bool guarded(int number, bool (*criterion)()) {
  try {
    return criterion();
  } catch (const std::exception& e) {
    std::cout << "FAIL criterion " << number << ": unexpected error [" << e.what() << "]\n";
    return false;
  }
}

}  // namespace

int main() {
  bool ok = true;
  try {
    const auto runs = run_classified();
    ok &= criterion1(runs);
    ok &= criterion2(runs);
  } catch (const std::exception& e) {
    std::cout << "FAIL criterion 1: unexpected error [" << e.what() << "]\n";
    std::cout << "FAIL criterion 2: unexpected error [" << e.what() << "]\n";
    ok = false;
  }
  ok &= guarded(3, criterion3);
  ok &= guarded(4, criterion4);
  ok &= guarded(5, criterion5);
  ok &= guarded(6, criterion6);
  ok &= guarded(7, criterion7);
  ok &= guarded(8, criterion8);
  std::cout << (ok ? "all acceptance criteria passed" : "acceptance FAILED") << "\n";
  return ok ? 0 : 1;
}
