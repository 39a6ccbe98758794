#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "quasimin/config.hpp"
#include "quasimin/error.hpp"
#include "quasimin/report_io.hpp"

namespace quasimin::cli {

namespace {

using nlohmann::json;

template <class Body>
int guarded(Body&& body, std::ostream& err) {
  try {
    return body();
  } catch (const AdmissibilityError& e) {
    err << "quasimin: " << to_string(e.kind()) << ": condition \"" << e.condition() << "\" violated at t="
        << format_double(e.t()) << "\n";
    return kExitInadmissible;
  } catch (const Error& e) {
    err << "quasimin: " << to_string(e.kind()) << ": " << e.what() << "\n";
    const bool inadmissible = e.kind() == ErrorKind::InadmissibleFamily || e.kind() == ErrorKind::VanishingCurvature;
    return inadmissible ? kExitInadmissible : kExitConfigError;
  } catch (const std::exception& e) {
    err << "quasimin: error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

SampleGrid parse_grid(const std::string& text) {
  int n = 0, m = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> n >> x >> m) || (x != 'x' && x != 'X') || !in.eof()) {
    throw Error(ErrorKind::ConfigError, "--grid expects NxM, got '" + text + "'");
  }
  if (n < 4 || m < 4) throw Error(ErrorKind::ConfigError, "--grid: resolution must be at least 4x4");
  return {n, m};
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  f << doc.dump(2) << "\n";
}

json admissibility_json(const std::vector<AdmissibilityScan>& scans) {
  json a = json::array();
  for (const auto& s : scans) a.push_back(to_json(s));
  return a;
}

}  // namespace

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig cfg = load_config(args.config);
        const std::string path = args.out ? *args.out : cfg.csv_path.value_or("");
        if (path.empty()) throw Error(ErrorKind::ConfigError, "no CSV path (use --out or output.csv)");
        const BuiltSurface built = build_surface(cfg);

        std::ofstream csv(path);
        if (!csv) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
        const std::size_t rows = write_surface_csv(csv, built.surface, cfg.grid, cfg.options.nullity);
        csv.close();

        json payload{{"config", cfg.echo},
                     {"surface", built.surface.name()},
                     {"space_form", built.surface.form().name()},
                     {"grid", {cfg.grid.ns, cfg.grid.nt}},
                     {"rows", rows},
                     {"admissibility", admissibility_json(built.admissibility)}};
        write_json(path + ".json", with_metadata(std::move(payload), "generate"));
        out << "wrote " << rows << " rows to " << path << " (sidecar " << path << ".json)\n";
        return kExitOk;
      },
      err);
}

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        RunConfig cfg = load_config(args.config);
        const std::string path = args.report ? *args.report : cfg.report_path.value_or("");
        if (path.empty()) throw Error(ErrorKind::ConfigError, "no report path (use --report or output.report)");
        if (args.grid) cfg.grid = parse_grid(*args.grid);
        if (args.tol) {
          if (!(*args.tol > 0)) throw Error(ErrorKind::ConfigError, "--tol must be > 0");
          cfg.options.lightlike_tol = *args.tol;
          cfg.options.frame_tol = *args.tol;
        }
        const BuiltSurface built = build_surface(cfg);

        CertificationReport report = certify_all(built.surface, cfg.grid, cfg.options);
        if (args.convergence) report.convergence = convergence_study(built.surface, cfg.grid, cfg.options, built.ode);

        json payload = to_json(report);
        payload["config"] = cfg.echo;
        payload["admissibility"] = admissibility_json(built.admissibility);
        write_json(path, with_metadata(std::move(payload), "certify"));

        for (const auto& p : report.properties) {
          out << (p.pass ? "PASS " : "FAIL ") << p.name << ": " << p.checked << " checked, " << p.failed
              << " failed, max " << format_double(p.max_residual);
          if (!p.note.empty()) out << " (" << p.note << ")";
          out << "\n";
        }
        if (report.convergence) {
          const auto& c = *report.convergence;
          out << (c.pass ? "PASS " : "FAIL ") << "convergence: ode order " << format_double(c.ode_order)
              << ", residual order " << format_double(c.residual_order) << " (";
          const char* names[] = {"gauss", "codazzi", "ricci"};
          for (std::size_t i = 0; i < 3; ++i) {
            out << (i ? ", " : "") << names[i] << " " << format_double(c.equation_order[i]);
            if (c.at_floor[i]) out << " at noise floor";
          }
          out << ")\n";
        }
        if (report.skipped() > 0) out << "skipped " << report.skipped() << " singular point(s)\n";
        for (const auto& r : report.points) {
          if (!r.failures.empty()) {
            out << "first failure at (" << format_double(r.point.s) << ", " << format_double(r.point.t)
                << "): " << r.failures.front() << "\n";
            break;
          }
        }
        out << (report.pass() ? "certified" : "certification failed") << ": " << built.surface.name() << " -> "
            << path << "\n";
        return report.pass() ? kExitOk : kExitCertificationFailed;
      },
      err);
}

int cmd_list_families(std::ostream& out) {
  for (const auto& f : family_table()) out << f.name << "\t" << f.condition << "\t" << f.summary << "\n";
  return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct and certify quasi-minimal surfaces with positive relative nullity"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a family on its grid and write CSV + JSON sidecar");
  generate->add_option("--config", gen.config, "JSON config")->required();
  generate->add_option("--out", gen.out, "CSV output path");

  CertifyArgs cert;
  auto* certify = app.add_subcommand("certify", "Run every certification and write a JSON report");
  certify->add_option("--config", cert.config, "JSON config")->required();
  certify->add_option("--report", cert.report, "JSON report path");
  certify->add_option("--grid", cert.grid, "grid resolution NxM");
  certify->add_option("--tol", cert.tol, "pointwise tolerance for lightlike and frame relations");
  certify->add_flag("--convergence", cert.convergence, "add the step-halving convergence study");

  auto* list = app.add_subcommand("list-families", "Print the family tags and admissibility conditions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  if (*generate) return cmd_generate(gen, out, err);
  if (*certify) return cmd_certify(cert, out, err);
  if (*list) return cmd_list_families(out);
  return kExitConfigError;
}

}  // namespace quasimin::cli
