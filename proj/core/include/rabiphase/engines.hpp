#pragma once

// One entry point per engine producing phases for both branches at one drive
// point, plus sweep relabeling and exact-engine resonance characterization.

#include <optional>
#include <vector>

#include "rabiphase/model.hpp"
#include "rabiphase/perturbation.hpp"
#include "rabiphase/phase_extraction.hpp"

namespace rabiphase {

struct EngineOptions {
  double dt_omega = 1e-4;         // exact engine step
  int quad_points = 10000;        // dynamic-phase quadrature for exact and pt5
  int w_grid_intervals = 50000;   // pt5 grid; must be a multiple of quad_points
  bool include_h3 = true;         // pt3
};

struct EngineResult {
  Engine engine = Engine::exact;
  DriveParams params;
  RenormParams renorm;
  double k = 0.0;          // pt3 only, NaN elsewhere
  PhaseResult plus;
  PhaseResult minus;
  double gap = 0.0;        // shortest arc between q+ and q-
  double dt_omega = 0.0;   // exact only, NaN elsewhere
  double unitarity_error = 0.0;  // exact: |det(U^dagger U) - 1|; pt3/pt5: polar projection distance
};

/// Labels follow the CHRW |+> at this point (the RWA uses its own states).
EngineResult run_engine(Engine e, const DriveParams& p, const EngineOptions& opt = {});

/// Exchanges the branch labels of a result.
void swap_branches(EngineResult& r);

/// Walks a sweep in order: each point takes the labels of the state overlapping most with
/// the previous point's |+>, and exact/pt5 totals move to the winding nearest the previous one.
void relabel_sweep(std::vector<EngineResult>& sweep);

/// Shortest arc between the eigenphases of the exact U(T), divided by T.
double exact_quasienergy_gap(const DriveParams& p, double dt_omega);

/// |d gamma_+ / d(delta/omega)| by a central difference of step h about `center`, with the
/// + label tracked through the midpoint.
double resonance_slope(Engine e, double a_over_omega, double center, double h = 1e-4, const EngineOptions& opt = {});

/// The exact resonance point is the gap minimum of the exact engine around the
/// Rabi = 2 n omega solver root. The slope is a central difference of
/// the tracked exact gamma with step h; h <= 0 picks min(1e-4, gap / 10).
ResonanceReport exact_resonance_report(double a_over_omega, int n, const EngineOptions& opt = {}, double h = 0.0);

}  // namespace rabiphase
