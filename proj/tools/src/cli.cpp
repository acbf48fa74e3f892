#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "rabiphase_cli/commands.hpp"

namespace rabiphase::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Engine> parse_engine_list(const std::string& s) {
  std::vector<Engine> out;
  for (const auto& name : split_list(s)) {
    const auto e = parse_engine(name);
    if (!e) throw ConfigError("unknown engine '" + name + "' (exact, rwa, chrw, pt3, pt5)");
    out.push_back(*e);
  }
  return out;
}

nlohmann::json to_json(const CsvDocument& doc) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : doc.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < doc.header.size() && i < row.size(); ++i) {
      const std::string& cell = row[i];
      if (cell.empty()) {
        obj[doc.header[i]] = nullptr;
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == cell.size() && cell.find_first_not_of("-0123456789") == std::string::npos) {
        obj[doc.header[i]] = std::stoll(cell);
      } else if (used == cell.size()) {
        obj[doc.header[i]] = v;
      } else {
        obj[doc.header[i]] = cell;
      }
    }
    rows.push_back(std::move(obj));
  }
  return {{"comments", doc.comments}, {"rows", rows}};
}

// Writes to `path` ("-" is stdout). Returns false when the file cannot be opened.
bool emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(out);
    return static_cast<bool>(out);
  }
  std::ofstream f(path);
  if (!f) return false;
  write(f);
  return static_cast<bool>(f);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric phases of a periodically driven two-level system"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file; options go in a section named after the subcommand");
  std::string out_path = "-";

  SweepConfig sweep;
  std::string sweep_engines = "chrw,rwa,exact";
  std::string svg_path;
  auto* s = app.add_subcommand("sweep", "Phases over a detuning range, one row per (delta, engine)");
  s->add_option("--A", sweep.a_over_omega, "Drive amplitude A/omega")->capture_default_str();
  s->add_option("--delta-min", sweep.delta_min, "First delta/omega")->capture_default_str();
  s->add_option("--delta-max", sweep.delta_max, "Last delta/omega")->capture_default_str();
  s->add_option("--steps", sweep.steps, "Number of delta points")->capture_default_str();
  s->add_option("--engines", sweep_engines, "Comma-separated engines")->capture_default_str();
  s->add_option("--dt-omega", sweep.dt_omega, "Exact-engine step omega*dt")->capture_default_str();
  s->add_option("--quad-points", sweep.quad_points, "Dynamic-phase quadrature points")->capture_default_str();
  s->add_option("--jobs", sweep.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  s->add_option("--svg", svg_path, "Also write an SVG plot of gamma_+ to this path");
  s->add_option("--out", out_path, "Output CSV path, - for stdout")->capture_default_str();

  ResonanceConfig res;
  std::string format = "csv";
  auto* r = app.add_subcommand("resonance", "Resonance point, gap and slope near Rabi = 2 n omega");
  r->add_option("--A", res.a_over_omega, "Drive amplitude A/omega")->capture_default_str();
  r->add_option("--harmonic-n", res.harmonic_n, "n in Rabi = 2 n omega (1 or 2)")->capture_default_str();
  r->add_option("--engine", res.engine, "closed_form, solver, exact_numeric or all")->capture_default_str();
  r->add_option("--dt-omega", res.dt_omega, "Exact-engine step omega*dt")->capture_default_str();
  r->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  r->add_option("--out", out_path, "Output path, - for stdout")->capture_default_str();

  BlochConfig bloch;
  auto* b = app.add_subcommand("bloch", "Bloch-vector trajectory of the exact evolution");
  b->add_option("--delta", bloch.delta_over_omega, "Qubit splitting delta/omega")->capture_default_str();
  b->add_option("--A", bloch.a_over_omega, "Drive amplitude A/omega")->capture_default_str();
  b->add_option("--initial", bloch.initial, "cyclic or instantaneous")->capture_default_str();
  b->add_option("--periods", bloch.periods, "Number of drive periods")->capture_default_str();
  b->add_option("--dt-omega", bloch.dt_omega, "Integrator step omega*dt")->capture_default_str();
  b->add_option("--samples-per-period", bloch.samples_per_period, "Rows per period")->capture_default_str();
  b->add_option("--out", out_path, "Output CSV path, - for stdout")->capture_default_str();

  SlopesGapsConfig sg;
  std::string sg_engines = "closed_form,pt3,exact";
  auto* g = app.add_subcommand("slopes-gaps", "Resonance slope and gap against drive amplitude");
  g->add_option("--a-min", sg.a_min, "Smallest A/omega")->capture_default_str();
  g->add_option("--a-max", sg.a_max, "Largest A/omega")->capture_default_str();
  g->add_option("--steps", sg.steps, "Number of amplitudes")->capture_default_str();
  g->add_option("--engines", sg_engines, "Comma-separated: closed_form, pt3, exact")->capture_default_str();
  g->add_option("--dt-omega", sg.dt_omega, "Exact-engine step omega*dt")->capture_default_str();
  g->add_option("--jobs", sg.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  g->add_option("--out", out_path, "Output CSV path, - for stdout")->capture_default_str();

  XiConfig xi;
  auto* x = app.add_subcommand("xi", "Renormalization parameter and derived symbols");
  x->add_option("--delta", xi.delta_over_omega, "Qubit splitting delta/omega")->capture_default_str();
  x->add_option("--A", xi.a_over_omega, "Drive amplitude A/omega")->capture_default_str();
  x->add_option("--out", out_path, "Output CSV path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as CallForHelp; anything else is a usage error.
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const auto csv_writer = [](const CsvDocument& doc) {
    return [&doc](std::ostream& os) { write_csv(os, doc); };
  };

  try {
    CommandResult result;
    std::function<void(std::ostream&)> writer;
    if (*s) {
      sweep.engines = parse_engine_list(sweep_engines);
      result = cmd_sweep(sweep);
      if (!svg_path.empty() &&
          !emit(svg_path, out, [&](std::ostream& os) { write_sweep_svg(os, result.doc); })) {
        err << "error: cannot write " << svg_path << "\n";
        return 2;
      }
    } else if (*r) {
      result = cmd_resonance(res);
      if (format == "json") {
        writer = [&result](std::ostream& os) { os << to_json(result.doc).dump(2) << "\n"; };
      }
    } else if (*b) {
      result = cmd_bloch(bloch);
    } else if (*g) {
      sg.engines = split_list(sg_engines);
      result = cmd_slopes_gaps(sg);
    } else {
      result = cmd_xi(xi);
    }
    if (!writer) writer = csv_writer(result.doc);
    if (!emit(out_path, out, writer)) {
      err << "error: cannot write " << out_path << "\n";
      return 2;
    }
    if (result.failures > 0) {
      err << result.failures << " row(s) failed; see the error column\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace rabiphase::cli
