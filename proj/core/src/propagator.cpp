#include "rabiphase/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "rabiphase/errors.hpp"

namespace rabiphase {

Mat2 rk4_step(const Mat2& u, const Mat2& h0, const Mat2& h_mid, const Mat2& h1, double dt) {
  const Complex mi(0.0, -1.0);
  const Mat2 k1 = mi * (h0 * u);
  const Mat2 k2 = mi * (h_mid * (u + (0.5 * dt) * k1));
  const Mat2 k3 = mi * (h_mid * (u + (0.5 * dt) * k2));
  const Mat2 k4 = mi * (h1 * (u + dt * k3));
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat2 propagate_interval(const HamiltonianFn& h, double t0, double t1, long steps) {
  if (steps < 1) throw DomainError("propagate_interval: steps must be >= 1");
  const double dt = (t1 - t0) / static_cast<double>(steps);
  Mat2 u = Mat2::identity();
  Mat2 h_left = h(t0);
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const Mat2 h_mid = h(t + 0.5 * dt);
    const Mat2 h_right = h(t0 + static_cast<double>(k + 1) * dt);
    u = rk4_step(u, h_left, h_mid, h_right, dt);
    h_left = h_right;
  }
  return u;
}

PropagationGrid propagate(const HamiltonianFn& h, const DriveParams& p, const PropagationOptions& opt) {
  if (!(opt.dt_omega >= 1e-6 && opt.dt_omega <= 1e-2)) {
    throw DomainError("propagate: dt*omega must lie in [1e-6, 1e-2]");
  }
  if (opt.n_periods < 1) throw DomainError("propagate: n_periods must be >= 1");
  if (opt.sample_intervals < 1) throw DomainError("propagate: sample_intervals must be >= 1");

  const double span = opt.n_periods * p.period();
  const auto raw_steps = static_cast<long>(std::ceil(opt.n_periods * kTwoPi / opt.dt_omega - 1e-9));
  const long intervals = std::min<long>(opt.sample_intervals, raw_steps);
  const long stride = (raw_steps + intervals - 1) / intervals;
  const long total = stride * intervals;

  PropagationGrid grid;
  grid.dt = span / static_cast<double>(total);
  grid.dt_omega = grid.dt * p.omega;
  grid.omega = p.omega;
  grid.n_periods = opt.n_periods;
  grid.steps_per_sample = stride;
  grid.total_steps = total;
  grid.samples.reserve(static_cast<std::size_t>(intervals + 1));
  grid.samples.push_back({0.0, Mat2::identity()});

  constexpr double eps = std::numeric_limits<double>::epsilon();
  Mat2 u = Mat2::identity();
  Mat2 h_left = h(0.0);
  double truncation = 0.0;  // running bound on the per-step RK4 amplitude error
  for (long k = 0; k < total; ++k) {
    const double t = static_cast<double>(k) * grid.dt;
    const Mat2 h_mid = h(t + 0.5 * grid.dt);
    const Mat2 h_right = h(static_cast<double>(k + 1) * grid.dt);
    u = rk4_step(u, h_left, h_mid, h_right, grid.dt);
    h_left = h_right;

    if ((k + 1) % stride == 0) {
      const double step_norm = 2.0 * max_abs(h_mid) * grid.dt;
      truncation = std::max(truncation, std::pow(step_norm, 6) / 72.0);
      const double err = unitarity_error(u);
      const double budget = static_cast<double>(k + 1) * (4.0 * eps + truncation);
      if (!std::isfinite(err) || err > 1e3 * budget + 1e-13) {
        throw DivergedError("propagate: unitarity error " + std::to_string(err) + " exceeds budget");
      }
      grid.max_unitarity_error = std::max(grid.max_unitarity_error, err);
      const long idx = (k + 1) / stride;
      grid.samples.push_back({idx == intervals ? span : static_cast<double>(k + 1) * grid.dt, u});
    }
  }
  grid.final_det_error = det_unitarity_error(u);
  return grid;
}

std::vector<TimedState> evolve_state(const PropagationGrid& grid, const Spinor2& psi0) {
  std::vector<TimedState> out;
  out.reserve(grid.samples.size());
  for (const auto& s : grid.samples) out.push_back({s.t, s.u * psi0});
  return out;
}

Mat2 GridEvolver::propagator_at(double t) const {
  const double spacing = grid_->spacing();
  const auto last = static_cast<long>(grid_->samples.size()) - 1;
  long i = static_cast<long>(std::floor(t / spacing + 1e-9));
  i = std::clamp<long>(i, 0, last);
  const PropagationSample& s = grid_->samples[static_cast<std::size_t>(i)];
  const double gap = t - s.t;
  if (std::abs(gap) <= 1e-12 * std::max(1.0, grid_->span())) return s.u;
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(gap) / grid_->dt)));
  return propagate_interval(h_, s.t, t, steps) * s.u;
}

std::array<double, 3> bloch_vector(const Spinor2& psi) {
  const Complex cross = std::conj(psi.c1) * psi.c2;
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi.c1) - std::norm(psi.c2)};
}

BlochTrajectory bloch_trajectory(std::span<const TimedState> states, const DriveParams& p) {
  BlochTrajectory traj;
  traj.points.reserve(states.size());
  const double period = p.period();
  for (const auto& s : states) {
    const auto v = bloch_vector(s.psi);
    traj.points.push_back({s.t / period, v[0], v[1], v[2]});
  }
  return traj;
}

void write_bloch_csv(std::ostream& os, const BlochTrajectory& traj) {
  os << "t_over_T,sx,sy,sz\n";
  char buf[128];
  for (const auto& pt : traj.points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", pt.t_over_t_period, pt.sx, pt.sy, pt.sz);
    os << buf;
  }
}

namespace {

struct LabEigen {
  double energy;  // upper eigenvalue; the lower one is -energy
  Spinor2 upper;
};

LabEigen lab_eigen(const DriveParams& p, double t) {
  const double hz = 0.5 * p.delta;
  const double hx = 0.5 * p.amplitude * std::cos(p.omega * t);
  const double e = std::hypot(hz, hx);
  if (!(e > 0.0)) throw DegenerateError("instantaneous Hamiltonian is degenerate");
  const double nz = hz / e;
  const double nx = hx / e;
  const Spinor2 up = nz >= 0.0 ? Spinor2{1.0 + nz, nx} : Spinor2{nx, 1.0 - nz};
  return {e, up.normalized()};
}

}  // namespace

Spinor2 instantaneous_eigenstate(const DriveParams& p, double t, Branch branch) {
  const LabEigen le = lab_eigen(p, t);
  return branch == Branch::plus ? le.upper : orthogonal_complement(le.upper);
}

double adiabaticity_ratio(const DriveParams& p, double t) {
  const LabEigen le = lab_eigen(p, t);
  const Mat2 h_dot = (-0.5 * p.amplitude * p.omega * std::sin(p.omega * t)) * kSigmaX;
  const Spinor2 lower = orthogonal_complement(le.upper);
  const double gap = 2.0 * le.energy;
  return std::abs(expectation(lower, h_dot, le.upper)) / (gap * gap);
}

}  // namespace rabiphase
