#include "quasimin/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "quasimin/error.hpp"

namespace quasimin {

namespace {

using nlohmann::json;

// Non-finite values become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json curvature_json(const CurvatureResiduals& r) {
  return {{"gauss", num(r.gauss)}, {"codazzi", num(r.codazzi)}, {"ricci", num(r.ricci)}};
}

json point_json(const PointRecord& r) {
  json p{{"s", r.point.s}, {"t", r.point.t}};
  if (r.skipped) {
    p["skipped"] = r.skip_reason;
    return p;
  }
  if (r.h_causal) {
    p["H_causal"] = to_string(*r.h_causal);
    p["H_inner"] = num(r.h_inner);
    p["H_norm"] = num(r.h_norm);
  }
  if (r.nullity) p["nullity"] = *r.nullity;
  if (r.frame) {
    const FrameResiduals& f = *r.frame;
    json fr{{"eps", f.eps},
            {"metric", num(f.metric)},
            {"second_form", num(f.second_form)},
            {"shape_e3", num(f.shape_e3)},
            {"omega", num(f.measured.omega)},
            {"gamma", num(f.measured.gamma)},
            {"phi", num(f.measured.phi)}};
    if (f.structure_error) fr["structure_error"] = num(*f.structure_error);
    p["frame"] = fr;
  } else if (!r.frame_error.empty()) {
    p["frame_error"] = r.frame_error;
  }
  if (r.curvature) p["curvature"] = curvature_json(*r.curvature);
  if (r.pde_residual) p["intrinsic_pde"] = num(*r.pde_residual);
  if (!r.failures.empty()) p["failures"] = r.failures;
  return p;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw Error(ErrorKind::EvaluationFailure, "format_double failed");
  return std::string(buf, res.ptr);
}

json to_json(const AdmissibilityScan& scan) {
  return {{"condition", scan.condition},
          {"samples", scan.samples},
          {"min_abs", num(scan.min_abs)},
          {"t_at_min", num(scan.t_at_min)},
          {"admissible", scan.admissible}};
}

json to_json(const ConvergenceStudy& c) {
  return {{"ode_problem", c.ode_problem},
          {"ode_order", num(c.ode_order)},
          {"residual_step", c.residual_step},
          {"coarse", curvature_json(c.coarse)},
          {"fine", curvature_json(c.fine)},
          {"residual_order", num(c.residual_order)},
          {"worst_equation_order", num(c.worst_equation_order)},
          {"equation_order",
           {{"gauss", num(c.equation_order[0])}, {"codazzi", num(c.equation_order[1])}, {"ricci", num(c.equation_order[2])}}},
          {"at_noise_floor", {{"gauss", c.at_floor[0]}, {"codazzi", c.at_floor[1]}, {"ricci", c.at_floor[2]}}},
          {"residual_at_noise_floor", c.residual_at_noise_floor},
          {"noise_floor", kResidualNoiseFloor},
          {"pass", c.pass}};
}

json to_json(const CertificationReport& report) {
  json props = json::array();
  for (const auto& p : report.properties) {
    props.push_back({{"name", p.name},
                     {"pass", p.pass},
                     {"checked", p.checked},
                     {"failed", p.failed},
                     {"max_residual", num(p.max_residual)},
                     {"note", p.note}});
  }
  json skipped = json::array();
  json points = json::array();
  for (const auto& r : report.points) {
    if (r.skipped) skipped.push_back({{"s", r.point.s}, {"t", r.point.t}, {"reason", r.skip_reason}});
    points.push_back(point_json(r));
  }
  json out{{"surface", report.surface},
           {"space_form", report.space_form},
           {"grid", {report.grid.ns, report.grid.nt}},
           {"pass", report.pass()},
           {"properties", props},
           {"skipped_count", report.skipped()},
           {"skipped", skipped}};
  out["convergence"] = report.convergence ? to_json(*report.convergence) : json(nullptr);
  out["points"] = points;
  return out;
}

json with_metadata(json payload, const std::string& command) {
  return {{"payload", std::move(payload)},
          {"metadata", {{"tool", "quasimin"}, {"command", command}, {"generated_at", utc_now()}}}};
}

std::size_t write_surface_csv(std::ostream& out, const Immersion& f, SampleGrid grid, const NullityOptions& nullity) {
  out << "s,t,x1,x2,x3,x4,x5,H1,H2,H3,H4,H5,nullity,on_form_residual\n";
  std::size_t rows = 0;
  for (const ChartPoint& p : grid_points(f.domain(), grid)) {
    const Vec x = f(p);
    std::string line = format_double(p.s) + "," + format_double(p.t);
    for (int i = 0; i < 5; ++i) line += "," + (i < x.size() ? format_double(x[i]) : std::string());
    std::optional<FundamentalData> d;
    try {
      d = fundamental_data(f, p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularPoint) throw;
    }
    for (int i = 0; i < 5; ++i) line += "," + (d && i < x.size() ? format_double(d->H[i]) : std::string());
    line += "," + (d ? std::to_string(relative_null_space(*d, nullity).dimension) : std::string());
    line += "," + format_double(form_residual(x, f.form()));
    out << line << '\n';
    ++rows;
  }
  return rows;
}

}  // namespace quasimin
