#include "quasimin/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

using nlohmann::json;
using Deriv = std::function<double(double, int)>;

// Closed-form derivatives carried by a parsed descriptor.
inline constexpr int kCarriedOrders = 6;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_number()) fail(where + ": '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + ": '" + key + "' must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, key, where);
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail(where + ": unknown key '" + k + "'");
  }
}

Deriv leaf(const json& j) {
  if (j.is_number()) {
    const double c = number(j, "value", "function");
    return [c](double, int k) { return k == 0 ? c : 0.0; };
  }
  const std::string name = j.at("fn").get<std::string>();
  if (name == "const") {
    only_keys(j, {"fn", "value"}, "const");
    if (!j.contains("value")) fail("const: missing 'value'");
    const double c = number(j.at("value"), "value", "const");
    return [c](double, int k) { return k == 0 ? c : 0.0; };
  }
  if (name == "poly") {
    only_keys(j, {"fn", "coeffs"}, "poly");
    if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty()) {
      fail("poly: 'coeffs' must be a non-empty array");
    }
    std::vector<double> a;
    for (const auto& c : j.at("coeffs")) a.push_back(number(c, "coeffs", "poly"));
    return [a](double t, int k) {
      double v = 0.0;
      for (std::size_t n = a.size(); n-- > static_cast<std::size_t>(k);) {
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= static_cast<double>(n - static_cast<std::size_t>(i));
        v = v * t + a[n] * falling;
      }
      return v;
    };
  }
  only_keys(j, {"fn", "amp", "freq", "phase"}, name);
  const double amp = number_or(j, "amp", 1.0, name);
  const double w = number_or(j, "freq", 1.0, name);
  const double ph = number_or(j, "phase", 0.0, name);
  std::function<double(double, int)> g;
  if (name == "sin") {
    g = [](double u, int k) {
      switch (k % 4) {
        case 0: return std::sin(u);
        case 1: return std::cos(u);
        case 2: return -std::sin(u);
        default: return -std::cos(u);
      }
    };
  } else if (name == "cos") {
    g = [](double u, int k) {
      switch (k % 4) {
        case 0: return std::cos(u);
        case 1: return -std::sin(u);
        case 2: return -std::cos(u);
        default: return std::sin(u);
      }
    };
  } else if (name == "sinh") {
    g = [](double u, int k) { return k % 2 == 0 ? std::sinh(u) : std::cosh(u); };
  } else if (name == "cosh") {
    g = [](double u, int k) { return k % 2 == 0 ? std::cosh(u) : std::sinh(u); };
  } else if (name == "exp") {
    g = [](double u, int) { return std::exp(u); };
  } else {
    fail("unknown function '" + name + "' (expected const, poly, sin, cos, sinh, cosh, exp)");
  }
  return [g, amp, w, ph](double t, int k) { return amp * std::pow(w, k) * g(w * t + ph, k); };
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

Deriv build(const json& j) {
  if (j.is_object() && (j.contains("sum") || j.contains("product"))) {
    const bool is_sum = j.contains("sum");
    const char* key = is_sum ? "sum" : "product";
    only_keys(j, {key}, key);
    const json& list = j.at(key);
    if (!list.is_array() || list.empty()) fail(std::string(key) + ": expected a non-empty array");
    std::vector<Deriv> parts;
    for (const auto& c : list) parts.push_back(build(c));
    if (is_sum) {
      return [parts](double t, int k) {
        double v = 0.0;
        for (const auto& p : parts) v += p(t, k);
        return v;
      };
    }
    Deriv acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const Deriv f = acc, g = parts[i];
      acc = [f, g](double t, int k) {
        double v = 0.0;
        for (int r = 0; r <= k; ++r) v += binomial(k, r) * f(t, r) * g(t, k - r);
        return v;
      };
    }
    return acc;
  }
  if (!(j.is_number() || (j.is_object() && j.contains("fn") && j.at("fn").is_string()))) {
    fail("function descriptor must be a number, {\"fn\":...}, {\"sum\":[...]} or {\"product\":[...]}");
  }
  return leaf(j);
}

Interval interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where + ": expected [lo, hi]");
  const double lo = number(j[0], where, where), hi = number(j[1], where, where);
  if (!(lo < hi)) fail(where + ": need lo < hi");
  return {lo, hi};
}

const std::set<std::string> kTopKeys{"family", "description", "m", "F", "b", "b0", "db0", "t0", "curve",
                                     "eps_sign", "domain", "grid", "ode_step", "tolerances", "output"};

}  // namespace

int descriptor_depth(const json& j) {
  for (const char* key : {"sum", "product"}) {
    if (j.is_object() && j.contains(key) && j.at(key).is_array()) {
      int d = 0;
      for (const auto& c : j.at(key)) d = std::max(d, descriptor_depth(c));
      return d + 1;
    }
  }
  return 0;
}

ScalarFn1 parse_function(const json& j) {
  if (descriptor_depth(j) > 2) fail("function descriptor nests sums/products deeper than 2");
  Deriv d;
  try {
    d = build(j);
  } catch (const json::exception& e) {
    fail(std::string("function descriptor: ") + e.what());
  }
  std::vector<ScalarFn1::Fn> ds;
  for (int k = 0; k < kCarriedOrders; ++k) ds.push_back([d, k](double t) { return d(t, k); });
  return ScalarFn1(std::move(ds));
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config must be a JSON object");
  only_keys(j, kTopKeys, "config");
  RunConfig cfg;
  cfg.echo = j;

  if (!j.contains("family") || !j.at("family").is_string()) fail("config: 'family' must be a string");
  cfg.family = j.at("family").get<std::string>();

  if (!j.contains("domain") || !j.at("domain").is_object()) fail("config: 'domain' must be {\"s\":[lo,hi],\"t\":[lo,hi]}");
  only_keys(j.at("domain"), {"s", "t"}, "domain");
  if (!j.at("domain").contains("s") || !j.at("domain").contains("t")) fail("domain: needs both 's' and 't'");
  cfg.domain = Rect{interval(j.at("domain").at("s"), "domain.s"), interval(j.at("domain").at("t"), "domain.t")};

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer()) {
      fail("grid: expected [N, M] integers");
    }
    cfg.grid = SampleGrid{g[0].get<int>(), g[1].get<int>()};
  }
  if (cfg.grid.ns < 4 || cfg.grid.nt < 4) fail("grid: resolution must be at least 4x4");

  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) fail("tolerances: expected an object");
    only_keys(t, {"lightlike", "nonzero", "frame", "structure", "residual", "pde"}, "tolerances");
    auto set = [&t](const char* key, double& dst) {
      if (!t.contains(key)) return;
      const double v = number(t.at(key), key, "tolerances");
      if (!(v > 0)) fail(std::string("tolerances: '") + key + "' must be > 0");
      dst = v;
    };
    set("lightlike", cfg.options.lightlike_tol);
    set("nonzero", cfg.options.nonzero_tol);
    set("frame", cfg.options.frame_tol);
    set("structure", cfg.options.structure_tol);
    set("residual", cfg.options.residual_tol);
    set("pde", cfg.options.pde_tol);
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) fail("output: expected an object");
    only_keys(o, {"csv", "report"}, "output");
    if (o.contains("csv")) cfg.csv_path = o.at("csv").get<std::string>();
    if (o.contains("report")) cfg.report_path = o.at("report").get<std::string>();
  }

  std::set<std::string> allowed{"family", "description", "domain", "grid", "tolerances", "output"};
  if (cfg.family == kControlFlatPlane || cfg.family == kControlGenericGraph) {
    only_keys(j, allowed, cfg.family);
    return cfg;
  }

  const auto tag = parse_family_tag(cfg.family);
  if (!tag) fail("unknown family '" + cfg.family + "' (see list-families)");
  FamilySpec spec;
  spec.tag = *tag;
  spec.domain = cfg.domain;

  auto fn = [&j](const char* key) {
    if (!j.contains(key)) fail(std::string("config: family needs '") + key + "'");
    return parse_function(j.at(key));
  };
  switch (*tag) {
    case FamilyTag::E42_i:
    case FamilyTag::E42_ii:
      allowed.insert({"m", "F", "b0", "db0", "t0", "ode_step"});
      spec.m = fn("m");
      spec.F = fn("F");
      spec.b0 = number_or(j, "b0", 0.0, "config");
      spec.db0 = number_or(j, "db0", 0.0, "config");
      break;
    case FamilyTag::S42_trig:
    case FamilyTag::S42_hyp:
      allowed.insert("b");
      spec.b = fn("b");
      break;
    case FamilyTag::S42_curve_timelike:
    case FamilyTag::S42_curve_spacelike: {
      const bool timelike = *tag == FamilyTag::S42_curve_timelike;
      allowed.insert({"b", "curve", "t0", "ode_step"});
      if (!timelike) allowed.insert("eps_sign");
      spec.b = fn("b");
      if (!j.contains("curve") || !j.at("curve").is_object()) fail("config: curve families need a 'curve' object");
      const json& c = j.at("curve");
      const std::string type = c.value("type", "");
      try {
        if (timelike) {
          if (type != "timelike") fail("curve: S42-curve-timelike needs {\"type\":\"timelike\",\"a\":...}");
          only_keys(c, {"type", "a"}, "curve");
          if (!c.contains("a")) fail("curve: missing 'a'");
          spec.curve = timelike_circle(number(c.at("a"), "a", "curve"));
        } else {
          if (type != "spacelike") fail("curve: S42-curve-spacelike needs {\"type\":\"spacelike\",\"A\":...}");
          only_keys(c, {"type", "A"}, "curve");
          if (!c.contains("A")) fail("curve: missing 'A'");
          spec.curve = spacelike_circle(number(c.at("A"), "A", "curve"));
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        fail(std::string("curve: ") + e.what());
      }
      if (!timelike && j.contains("eps_sign")) {
        if (!j.at("eps_sign").is_number_integer()) fail("eps_sign must be +1 or -1");
        spec.eps_sign = j.at("eps_sign").get<int>();
        if (spec.eps_sign != 1 && spec.eps_sign != -1) fail("eps_sign must be +1 or -1");
      }
      break;
    }
  }
  only_keys(j, allowed, cfg.family);
  if (j.contains("t0")) spec.t0 = number(j.at("t0"), "t0", "config");
  if (j.contains("ode_step")) {
    spec.ode_step = number(j.at("ode_step"), "ode_step", "config");
    if (!(spec.ode_step > 0 && spec.ode_step <= 0.1)) fail("ode_step must be in (0, 0.1]");
  }
  cfg.spec = std::move(spec);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

BuiltSurface build_surface(const RunConfig& cfg) {
  if (cfg.family == kControlFlatPlane) return {control_flat_plane(cfg.domain), {}, std::nullopt};
  if (cfg.family == kControlGenericGraph) return {control_generic_graph(cfg.domain), {}, std::nullopt};
  if (!cfg.spec) fail("config does not resolve to a family");
  const FamilySpec& spec = *cfg.spec;
  Family fam = build_family(spec);
  std::optional<OdeProblem> ode;
  if (spec.tag == FamilyTag::E42_i || spec.tag == FamilyTag::E42_ii) {
    const double t0 = spec.t0.value_or(spec.domain.t.lo);
    const double t1 = t0 == spec.domain.t.hi ? spec.domain.t.lo : spec.domain.t.hi;
    ode = OdeProblem{1, spec.F, t0, spec.b0, spec.db0, t1, "b''-b=F with the configured F, b0, db0"};
  }
  return {std::move(fam.surface), std::move(fam.admissibility), std::move(ode)};
}

}  // namespace quasimin
