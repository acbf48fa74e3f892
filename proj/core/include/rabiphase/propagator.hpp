#pragma once

// Fixed-step RK4 integration of i dU/dt = H(t) U for 2x2 Hamiltonians.

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "rabiphase/linalg2.hpp"
#include "rabiphase/model.hpp"

namespace rabiphase {

struct PropagationOptions {
  double dt_omega = 1e-5;     // requested step, dimensionless; rounded down so steps tile the span
  int n_periods = 1;
  int sample_intervals = 4096;  // stored samples per run minus one
};

struct PropagationSample {
  double t = 0.0;
  Mat2 u;
};

/// U(t) on a uniform grid over [0, n_periods T]. Immutable once built.
struct PropagationGrid {
  double dt_omega = 0.0;  // step actually used
  double dt = 0.0;
  double omega = 1.0;
  int n_periods = 1;
  long steps_per_sample = 1;
  long total_steps = 0;
  std::vector<PropagationSample> samples;
  double final_det_error = 0.0;      // |det(U^dagger U) - 1| at the last step
  double max_unitarity_error = 0.0;  // max over samples of max|U^dagger U - I|

  const Mat2& final_u() const { return samples.back().u; }
  double spacing() const { return samples.size() > 1 ? samples[1].t - samples[0].t : 0.0; }
  double span() const { return samples.back().t; }
};

/// One classical RK4 step from (t, u) of length dt. h0/h_mid/h1 are H at t, t+dt/2, t+dt.
Mat2 rk4_step(const Mat2& u, const Mat2& h0, const Mat2& h_mid, const Mat2& h1, double dt);

/// Propagates from t=0. Requires dt_omega in [1e-6, 1e-2]; throws DivergedError when the
/// unitarity drift exceeds 1e3 times the step-count-scaled budget.
PropagationGrid propagate(const HamiltonianFn& h, const DriveParams& p, const PropagationOptions& opt = {});

/// U(t1, t0) with `steps` uniform RK4 steps.
Mat2 propagate_interval(const HamiltonianFn& h, double t0, double t1, long steps);

struct TimedState {
  double t = 0.0;
  Spinor2 psi;
};

/// psi(t_i) = U(t_i) psi0 for every stored sample.
std::vector<TimedState> evolve_state(const PropagationGrid& grid, const Spinor2& psi0);

/// State source at arbitrary t: stored sample if t is on the grid, otherwise
/// RK4 from the nearest earlier sample with the grid's step.
class GridEvolver {
 public:
  GridEvolver(const PropagationGrid& grid, HamiltonianFn h) : grid_(&grid), h_(std::move(h)) {}

  Mat2 propagator_at(double t) const;
  Spinor2 operator()(double t, const Spinor2& psi0) const { return propagator_at(t) * psi0; }

 private:
  const PropagationGrid* grid_;
  HamiltonianFn h_;
};

struct BlochPoint {
  double t_over_t_period = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;
};

struct BlochTrajectory {
  std::vector<BlochPoint> points;
};

/// (<sx>, <sy>, <sz>) of a normalized state.
std::array<double, 3> bloch_vector(const Spinor2& psi);

BlochTrajectory bloch_trajectory(std::span<const TimedState> states, const DriveParams& p);

/// Header `t_over_T,sx,sy,sz`, 12 significant digits, LF endings.
void write_bloch_csv(std::ostream& os, const BlochTrajectory& traj);

/// Normalized eigenvector of hamiltonian_lab(p, t); plus is the upper energy.
Spinor2 instantaneous_eigenstate(const DriveParams& p, double t, Branch branch);

/// |<phi1| dH/dt |phi2>| / (E2 - E1)^2 with the analytic dH/dt.
double adiabaticity_ratio(const DriveParams& p, double t);

}  // namespace rabiphase
