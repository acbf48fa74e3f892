#include "rabiphase_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "rabiphase/chrw.hpp"
#include "rabiphase/errors.hpp"
#include "rabiphase/perturbation.hpp"
#include "rabiphase/propagator.hpp"

namespace rabiphase::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join_engines(const std::vector<Engine>& engines) {
  std::string s;
  for (Engine e : engines) {
    if (!s.empty()) s += ';';
    s += engine_name(e);
  }
  return s;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_finite(double x, const char* name) { require(std::isfinite(x), std::string(name) + " must be finite"); }

HamiltonianFn lab(const DriveParams& p) {
  return [p](double t) { return hamiltonian_lab(p, t); };
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f) {
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
}

// ---- sweep ----

void SweepConfig::validate() const {
  require_finite(a_over_omega, "A");
  require_finite(delta_min, "delta-min");
  require_finite(delta_max, "delta-max");
  require(a_over_omega >= 0.0, "A must be >= 0");
  require(delta_min > 0.0, "delta-min must be > 0");
  require(delta_min < delta_max, "delta-min must be < delta-max");
  require(steps >= 2, "steps must be >= 2");
  require(!engines.empty(), "engines must be non-empty");
  require(dt_omega >= 1e-6 && dt_omega <= 1e-2, "dt-omega must lie in [1e-6, 1e-2]");
  require(quad_points >= 1000 && quad_points % 2 == 0, "quad-points must be even and >= 1000");
  require(jobs >= 0, "jobs must be >= 0");
}

std::vector<double> SweepConfig::deltas() const {
  std::vector<double> d(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    d[static_cast<std::size_t>(i)] =
        i == steps - 1 ? delta_max : delta_min + (delta_max - delta_min) * i / static_cast<double>(steps - 1);
  }
  return d;
}

EngineOptions SweepConfig::engine_options() const {
  EngineOptions opt;
  opt.dt_omega = dt_omega;
  opt.quad_points = quad_points;
  opt.w_grid_intervals = quad_points * ((50000 + quad_points - 1) / quad_points);
  return opt;
}

std::string SweepConfig::describe() const {
  return "rabiphase sweep A_over_omega=" + format_number(a_over_omega) + " delta_min=" + format_number(delta_min) +
         " delta_max=" + format_number(delta_max) + " steps=" + std::to_string(steps) +
         " engines=" + join_engines(engines) + " dt_omega=" + format_number(dt_omega) +
         " quad_points=" + std::to_string(quad_points);
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "delta_over_omega", "A_over_omega",       "engine",          "xi",
      "k",                "rabi_tilde_over_omega", "q_plus_over_omega", "q_minus_over_omega",
      "theta_plus",       "alpha_plus",         "gamma_plus_over_pi", "gamma_minus_over_pi",
      "c1_sq",            "c2_sq",              "unitarity_error", "dt_omega",
      "gamma_plus_unfolded_over_pi", "gamma_minus_unfolded_over_pi", "gap_over_omega", "error"};
  return cols;
}

namespace {

std::vector<std::string> sweep_row(const EngineResult& r) {
  const double rabi = r.engine == Engine::rwa ? rwa_rabi_frequency(r.params) : r.renorm.rabi_tilde;
  const double w = r.params.omega;
  return {format_number(r.params.delta / w),
          format_number(r.params.amplitude / w),
          std::string(engine_name(r.engine)),
          format_number(r.renorm.xi),
          format_number(r.k),
          format_number(rabi / w),
          format_number(r.plus.q / w),
          format_number(r.minus.q / w),
          format_number(r.plus.theta),
          format_number(r.plus.alpha),
          format_number(r.plus.gamma / kPi),
          format_number(r.minus.gamma / kPi),
          format_number(std::norm(r.plus.cyclic_state.c1)),
          format_number(std::norm(r.plus.cyclic_state.c2)),
          format_number(r.unitarity_error),
          format_number(r.dt_omega),
          format_number(r.plus.gamma_unfolded / kPi),
          format_number(r.minus.gamma_unfolded / kPi),
          format_number(r.gap / w),
          ""};
}

std::vector<std::string> error_row(const std::vector<std::string>& lead, std::size_t width, const std::string& msg) {
  std::vector<std::string> row = lead;
  row.resize(width - 1);
  row.push_back(sanitize_cell(msg));
  return row;
}

}  // namespace

CommandResult cmd_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<Engine> engines = cfg.engines;
  std::sort(engines.begin(), engines.end());
  engines.erase(std::unique(engines.begin(), engines.end()), engines.end());
  const std::vector<double> deltas = cfg.deltas();
  const EngineOptions opt = cfg.engine_options();

  const std::size_t n = deltas.size() * engines.size();
  std::vector<std::optional<EngineResult>> results(n);
  std::vector<std::string> errors(n);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    const double d = deltas[i / engines.size()];
    const Engine e = engines[i % engines.size()];
    try {
      results[i] = run_engine(e, DriveParams::in_omega_units(d, cfg.a_over_omega), opt);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  for (std::size_t j = 0; j < engines.size(); ++j) {
    std::vector<std::size_t> idx;
    std::vector<EngineResult> track;
    for (std::size_t i = j; i < n; i += engines.size()) {
      if (results[i]) {
        idx.push_back(i);
        track.push_back(*results[i]);
      }
    }
    relabel_sweep(track);
    for (std::size_t m = 0; m < idx.size(); ++m) results[idx[m]] = track[m];
  }

  CommandResult out;
  out.doc.comments.push_back(cfg.describe());
  out.doc.header = sweep_columns();
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      out.doc.rows.push_back(sweep_row(*results[i]));
    } else {
      ++out.failures;
      const double d = deltas[i / engines.size()];
      out.doc.rows.push_back(error_row({format_number(d), format_number(cfg.a_over_omega),
                                        std::string(engine_name(engines[i % engines.size()]))},
                                       sweep_columns().size(), errors[i]));
    }
  }
  return out;
}

// ---- resonance ----

void ResonanceConfig::validate() const {
  require_finite(a_over_omega, "A");
  require(a_over_omega >= 0.0, "A must be >= 0");
  require(harmonic_n == 1 || harmonic_n == 2, "harmonic-n must be 1 or 2");
  require(engine == "all" || engine == "closed_form" || engine == "solver" || engine == "exact_numeric",
          "engine must be closed_form, solver, exact_numeric or all");
  require(!(engine == "closed_form" && harmonic_n != 1), "closed-form laws cover harmonic-n = 1 only");
  require(dt_omega >= 1e-6 && dt_omega <= 1e-2, "dt-omega must lie in [1e-6, 1e-2]");
}

CommandResult cmd_resonance(const ResonanceConfig& cfg) {
  cfg.validate();
  CommandResult out;
  out.doc.comments.push_back("rabiphase resonance A_over_omega=" + format_number(cfg.a_over_omega) +
                             " harmonic_n=" + std::to_string(cfg.harmonic_n) + " engine=" + cfg.engine +
                             " dt_omega=" + format_number(cfg.dt_omega));
  out.doc.header = {"engine", "harmonic_order", "A_over_omega", "delta_res", "gap", "slope", "x", "error"};
  const DriveParams p = DriveParams::in_omega_units(2.0 * cfg.harmonic_n + 1.0, cfg.a_over_omega);
  const auto lead = [&](const char* name) {
    return std::vector<std::string>{name, std::to_string(cfg.harmonic_n), format_number(cfg.a_over_omega)};
  };
  const auto emit = [&](const char* name, double dres, double gap, double slope, double x) {
    auto row = lead(name);
    for (double v : {dres, gap, slope, x}) row.push_back(format_number(v));
    row.emplace_back();
    out.doc.rows.push_back(row);
  };
  const auto attempt = [&](const char* name, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& ex) {
      ++out.failures;
      out.doc.rows.push_back(error_row(lead(name), out.doc.header.size(), ex.what()));
    }
  };
  const bool all = cfg.engine == "all";

  if ((all && cfg.harmonic_n == 1) || cfg.engine == "closed_form") {
    attempt("closed_form", [&] {
      const ResonanceReport rep = closed_form_report(p);
      emit("closed_form", rep.delta_res, rep.gap, rep.slope, rep.x);
    });
  }
  if (all || cfg.engine == "solver") {
    attempt("solver", [&] {
      const double dres = resonance_point_solve(p, cfg.harmonic_n);
      double gap = kNaN;
      double slope = kNaN;
      if (cfg.harmonic_n == 1) {
        const DriveParams at{dres, cfg.a_over_omega, 1.0};
        gap = std::abs(combined_k(at, solve_xi(at), true).k0);
        slope = resonance_slope(Engine::pt3, cfg.a_over_omega, dres);
      }
      emit("solver", dres, gap, slope, resonance_shift_x(p));
    });
  }
  if (all || cfg.engine == "exact_numeric") {
    attempt("exact_numeric", [&] {
      EngineOptions opt;
      opt.dt_omega = cfg.dt_omega;
      const ResonanceReport rep = exact_resonance_report(cfg.a_over_omega, cfg.harmonic_n, opt);
      emit("exact_numeric", rep.delta_res, rep.gap, rep.slope, rep.x);
    });
  }
  return out;
}

// ---- bloch ----

void BlochConfig::validate() const {
  require_finite(delta_over_omega, "delta");
  require_finite(a_over_omega, "A");
  require(delta_over_omega > 0.0, "delta must be > 0");
  require(a_over_omega >= 0.0, "A must be >= 0");
  require(initial == "cyclic" || initial == "instantaneous", "initial must be cyclic or instantaneous");
  require(periods >= 1, "periods must be >= 1");
  require(samples_per_period >= 1, "samples-per-period must be >= 1");
  require(dt_omega >= 1e-6 && dt_omega <= 1e-2, "dt-omega must lie in [1e-6, 1e-2]");
}

CommandResult cmd_bloch(const BlochConfig& cfg) {
  cfg.validate();
  const DriveParams p = DriveParams::in_omega_units(cfg.delta_over_omega, cfg.a_over_omega);
  const HamiltonianFn h = lab(p);
  Spinor2 psi0;
  if (cfg.initial == "cyclic") {
    const PropagationGrid one = propagate(h, p, {cfg.dt_omega, 1, 1});
    const auto eig = eigensystem_unitary2(one.final_u());
    std::pair<Spinor2, Spinor2> states{eig[0].vector, eig[1].vector};
    if (const auto r = solve_xi(p); branch_label(states, chrw_cyclic_states(r)).swapped) {
      std::swap(states.first, states.second);
    }
    psi0 = states.first;
  } else {
    psi0 = instantaneous_eigenstate(p, 0.0, Branch::plus);
  }
  const PropagationGrid grid = propagate(h, p, {cfg.dt_omega, cfg.periods, cfg.periods * cfg.samples_per_period});
  const auto states = evolve_state(grid, psi0);
  const BlochTrajectory traj = bloch_trajectory(states, p);

  CommandResult out;
  out.doc.comments.push_back("rabiphase bloch delta_over_omega=" + format_number(cfg.delta_over_omega) +
                             " A_over_omega=" + format_number(cfg.a_over_omega) + " initial=" + cfg.initial +
                             " periods=" + std::to_string(cfg.periods) + " dt_omega=" + format_number(cfg.dt_omega) +
                             " samples_per_period=" + std::to_string(cfg.samples_per_period));
  out.doc.header = {"t_over_T", "sx", "sy", "sz"};
  for (const auto& pt : traj.points) {
    out.doc.rows.push_back(
        {format_number(pt.t_over_t_period), format_number(pt.sx), format_number(pt.sy), format_number(pt.sz)});
  }
  return out;
}

// ---- slopes and gaps ----

void SlopesGapsConfig::validate() const {
  require_finite(a_min, "a-min");
  require_finite(a_max, "a-max");
  require(a_min > 0.0, "a-min must be > 0");
  require(a_min <= a_max, "a-min must be <= a-max");
  require(steps >= 1, "steps must be >= 1");
  require(steps == 1 || a_min < a_max, "a-min must be < a-max when steps > 1");
  require(a_max <= 2.0, "A/omega above 2 is outside the closed-form validity envelope");
  require(!engines.empty(), "engines must be non-empty");
  for (const auto& e : engines) {
    require(e == "closed_form" || e == "pt3" || e == "exact", "slopes-gaps engines are closed_form, pt3, exact");
  }
  require(dt_omega >= 1e-6 && dt_omega <= 1e-2, "dt-omega must lie in [1e-6, 1e-2]");
  require(jobs >= 0, "jobs must be >= 0");
}

CommandResult cmd_slopes_gaps(const SlopesGapsConfig& cfg) {
  cfg.validate();
  const auto wants = [&](const char* e) { return std::find(cfg.engines.begin(), cfg.engines.end(), e) != cfg.engines.end(); };
  const std::vector<std::string> header{
      "A_over_omega",  "omega_over_A_sq",  "delta_res_closed", "slope_closed", "scaled_slope_closed",
      "gap_closed",    "gap_leading",      "delta_res_solver", "gap_pt3",      "slope_pt3",
      "scaled_slope_pt3", "delta_res_exact", "gap_exact",      "slope_exact",  "scaled_slope_exact",
      "error"};
  std::vector<double> amps(static_cast<std::size_t>(cfg.steps));
  for (int i = 0; i < cfg.steps; ++i) {
    amps[static_cast<std::size_t>(i)] =
        cfg.steps == 1 || i == cfg.steps - 1 ? cfg.a_max
                                             : cfg.a_min + (cfg.a_max - cfg.a_min) * i / static_cast<double>(cfg.steps - 1);
  }
  if (cfg.steps == 1) amps[0] = cfg.a_min;

  std::vector<std::vector<std::string>> rows(amps.size());
  std::vector<int> failed(amps.size(), 0);
  parallel_for(amps.size(), cfg.jobs, [&](std::size_t i) {
    const double a = amps[i];
    const DriveParams p = DriveParams::in_omega_units(3.0, a);
    const double scale = 100.0 / a;  // 100 omega / A
    std::vector<double> v(header.size() - 1, kNaN);
    v[0] = a;
    v[1] = 1.0 / (a * a);
    std::string err;
    const auto guard = [&](const char* what, const std::function<void()>& f) {
      try {
        f();
      } catch (const std::exception& ex) {
        if (!err.empty()) err += "; ";
        err += std::string(what) + ": " + ex.what();
      }
    };
    if (wants("closed_form")) {
      v[2] = resonance_point_closed_form(p);
      v[3] = slope_closed_form(p);
      v[4] = v[3] / scale;
      v[5] = gap_closed_form(p);
      v[6] = a * a * a / 128.0;
    }
    if (wants("pt3")) {
      guard("pt3", [&] {
        v[7] = resonance_point_solve(p, 1);
        const DriveParams at{v[7], a, 1.0};
        v[8] = std::abs(combined_k(at, solve_xi(at), true).k0);
        v[9] = resonance_slope(Engine::pt3, a, v[7]);
        v[10] = v[9] / scale;
      });
    }
    if (wants("exact")) {
      guard("exact", [&] {
        EngineOptions opt;
        opt.dt_omega = cfg.dt_omega;
        const ResonanceReport rep = exact_resonance_report(a, 1, opt);
        v[11] = rep.delta_res;
        v[12] = rep.gap;
        v[13] = rep.slope;
        v[14] = rep.slope / scale;
      });
    }
    for (double x : v) rows[i].push_back(format_number(x));
    rows[i].push_back(sanitize_cell(err));
    failed[i] = err.empty() ? 0 : 1;
  });

  CommandResult out;
  std::string engines;
  for (const auto& e : cfg.engines) engines += (engines.empty() ? "" : ";") + e;
  out.doc.comments.push_back("rabiphase slopes-gaps a_min=" + format_number(cfg.a_min) +
                             " a_max=" + format_number(cfg.a_max) + " steps=" + std::to_string(cfg.steps) +
                             " engines=" + engines + " dt_omega=" + format_number(cfg.dt_omega));
  out.doc.header = header;
  out.doc.rows = std::move(rows);
  for (int f : failed) out.failures += f;
  return out;
}

// ---- xi ----

void XiConfig::validate() const {
  require_finite(delta_over_omega, "delta");
  require_finite(a_over_omega, "A");
  require(delta_over_omega > 0.0, "delta must be > 0");
  require(a_over_omega >= 0.0, "A must be >= 0");
}

CommandResult cmd_xi(const XiConfig& cfg) {
  cfg.validate();
  CommandResult out;
  out.doc.comments.push_back("rabiphase xi delta_over_omega=" + format_number(cfg.delta_over_omega) +
                             " A_over_omega=" + format_number(cfg.a_over_omega));
  out.doc.header = {"delta_over_omega", "A_over_omega", "xi",          "z",        "a_tilde",          "delta_tilde",
                    "detuning_tilde",   "rabi_tilde",   "residual",    "outside_validity", "error"};
  const std::vector<std::string> lead{format_number(cfg.delta_over_omega), format_number(cfg.a_over_omega)};
  try {
    const RenormParams r = solve_xi(DriveParams::in_omega_units(cfg.delta_over_omega, cfg.a_over_omega));
    std::vector<std::string> row = lead;
    for (double v : {r.xi, r.z, r.a_tilde, r.delta_tilde, r.detuning_tilde, r.rabi_tilde, r.residual}) {
      row.push_back(format_number(v));
    }
    row.push_back(r.outside_validity ? "1" : "0");
    row.emplace_back();
    out.doc.rows.push_back(row);
  } catch (const MultipleRootsError& ex) {
    std::string msg = ex.what();
    msg += " roots:";
    for (double x : ex.roots()) msg += " " + format_number(x);
    ++out.failures;
    out.doc.rows.push_back(error_row(lead, out.doc.header.size(), msg));
  } catch (const Error& ex) {
    ++out.failures;
    out.doc.rows.push_back(error_row(lead, out.doc.header.size(), ex.what()));
  }
  return out;
}

// ---- svg ----

void write_sweep_svg(std::ostream& os, const CsvDocument& sweep) {
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(sweep.header.begin(), sweep.header.end(), name) - sweep.header.begin());
  };
  const std::size_t cx = col("delta_over_omega");
  const std::size_t cy = col("gamma_plus_over_pi");
  const std::size_t ce = col("engine");
  std::map<std::string, std::vector<std::pair<double, double>>> lines;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  for (const auto& row : sweep.rows) {
    if (cy >= row.size() || row[cy].empty()) continue;
    const double x = std::stod(row[cx]);
    lines[row[ce]].emplace_back(x, std::stod(row[cy]));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  const double width = 800.0;
  const double height = 400.0;
  const double pad = 40.0;
  const auto sx = [&](double x) { return pad + (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5) * (width - 2 * pad); };
  const auto sy = [&](double y) { return height - pad - y / 2.0 * (height - 2 * pad); };  // gamma/pi in [0, 2]
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << width - 2 * pad << "\" height=\""
     << height - 2 * pad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  std::size_t c = 0;
  for (const auto& [engine, pts] : lines) {
    const char* color = colors[c++ % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [x, y] : pts) os << format_number(sx(x)) << ',' << format_number(sy(y)) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << width - pad - 60 << "\" y=\"" << pad + 15 * c << "\" fill=\"" << color << "\">" << engine
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace rabiphase::cli
