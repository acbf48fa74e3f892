#pragma once

// Subcommand implementations. Each builds a CsvDocument; the CLI layer writes it.

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabiphase/engines.hpp"
#include "rabiphase_cli/csv.hpp"

namespace rabiphase::cli {

/// Invalid user configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  CsvDocument doc;
  int failures = 0;  // rows carrying an error
};

struct SweepConfig {
  double a_over_omega = 1.0;
  double delta_min = 0.1;
  double delta_max = 3.5;
  int steps = 100;
  std::vector<Engine> engines{Engine::chrw, Engine::rwa, Engine::exact};
  double dt_omega = 1e-4;
  int quad_points = 10000;
  int jobs = 0;  // 0 = hardware concurrency

  void validate() const;
  std::vector<double> deltas() const;
  EngineOptions engine_options() const;
  std::string describe() const;
};

/// One row per (delta, engine), sorted by delta then engine; labels tracked along delta per engine.
CommandResult cmd_sweep(const SweepConfig& cfg);

/// Sweep columns in order.
const std::vector<std::string>& sweep_columns();

struct ResonanceConfig {
  double a_over_omega = 1.0;
  int harmonic_n = 1;
  std::string engine = "all";  // closed_form, solver, exact_numeric or all
  double dt_omega = 1e-4;
  void validate() const;
};

CommandResult cmd_resonance(const ResonanceConfig& cfg);

struct BlochConfig {
  double delta_over_omega = 2.9;
  double a_over_omega = 1.0;
  std::string initial = "cyclic";  // cyclic or instantaneous
  int periods = 10;
  double dt_omega = 1e-4;
  int samples_per_period = 200;
  void validate() const;
};

CommandResult cmd_bloch(const BlochConfig& cfg);

struct SlopesGapsConfig {
  double a_min = 1.0;
  double a_max = 2.0;
  int steps = 6;
  std::vector<std::string> engines{"closed_form", "pt3", "exact"};
  double dt_omega = 1e-4;
  int jobs = 0;
  void validate() const;
};

CommandResult cmd_slopes_gaps(const SlopesGapsConfig& cfg);

struct XiConfig {
  double delta_over_omega = 1.0;
  double a_over_omega = 1.0;
  void validate() const;
};

CommandResult cmd_xi(const XiConfig& cfg);

/// Polyline plot of gamma_plus_over_pi against delta_over_omega, one line per engine.
void write_sweep_svg(std::ostream& os, const CsvDocument& sweep);

/// Runs f(i) for i in [0, n) on up to `jobs` threads (0 = hardware concurrency).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& f);

/// Full command line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rabiphase::cli
