#include <gtest/gtest.h>

#include <sstream>

#include "oracle.hpp"
#include "rabiphase/chrw.hpp"
#include "rabiphase/errors.hpp"
#include "rabiphase/propagator.hpp"

using namespace rabiphase;

namespace {

HamiltonianFn lab(const DriveParams& p) {
  return [p](double t) { return hamiltonian_lab(p, t); };
}

}  // namespace

TEST(Propagate, ConstantSigmaZ) {
  const DriveParams p{1.7, 0.0, 1.0};
  const auto grid = propagate([&](double) { return (0.5 * p.delta) * kSigmaZ; }, p, {1e-4, 1, 64});
  const double T = p.period();
  const Mat2 expect{std::exp(Complex(0, -0.5 * p.delta * T)), 0.0, 0.0, std::exp(Complex(0, 0.5 * p.delta * T))};
  EXPECT_LT(oracle::max_diff(grid.final_u(), expect), 1e-10);
  EXPECT_EQ(grid.samples.size(), 65u);
  EXPECT_EQ(grid.samples.front().t, 0.0);
  EXPECT_EQ(grid.span(), T);
  EXPECT_EQ(grid.total_steps % 64, 0);
  EXPECT_LE(grid.dt_omega, 1e-4);
}

TEST(Propagate, ChrwHamiltonianMatchesClosedForm) {
  const DriveParams p = DriveParams::in_omega_units(1.0, 1.0);
  const RenormParams r = solve_xi(p);
  const auto grid = propagate([&](double t) { return hamiltonian_chrw(p, r, t); }, p, {1e-4, 1, 2});
  EXPECT_LT(oracle::max_diff(grid.final_u(), u0_analytic(r, p, p.period())), 1e-8);
  EXPECT_LT(oracle::max_diff(grid.samples[1].u, u0_analytic(r, p, p.period() / 2.0)), 1e-8);
}

TEST(Propagate, FineStepKeepsUnitarity) {
  const DriveParams p = DriveParams::in_omega_units(1.0, 1.0);
  const auto grid = propagate(lab(p), p, {1e-5, 1, 4096});
  EXPECT_LT(grid.final_det_error, 1e-12);
  EXPECT_LT(grid.max_unitarity_error, 1e-12);
  for (std::size_t i = 1; i < grid.samples.size(); ++i) {
    EXPECT_NEAR(grid.samples[i].t - grid.samples[i - 1].t, grid.spacing(), 1e-12);
  }
}

TEST(Propagate, RejectsStepOutsideRange) {
  const DriveParams p = DriveParams::in_omega_units(1.0, 1.0);
  EXPECT_THROW(propagate(lab(p), p, {1e-7, 1, 16}), DomainError);
  EXPECT_THROW(propagate(lab(p), p, {2e-2, 1, 16}), DomainError);
  EXPECT_THROW(propagate(lab(p), p, {1e-3, 0, 16}), DomainError);
}

TEST(Propagate, NonHermitianGeneratorDiverges) {
  const DriveParams p = DriveParams::in_omega_units(1.0, 1.0);
  const auto bad = [](double) { return Complex(0.0, -0.5) * Mat2::identity(); };
  EXPECT_THROW(propagate(bad, p, {1e-3, 1, 16}), DivergedError);
}

TEST(Propagate, Composition) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  const auto grid = propagate(lab(p), p, {1e-4, 1, 3});
  const double T = p.period();
  const Mat2 u13 = grid.samples[1].u;
  const Mat2 u23 = grid.samples[2].u;
  EXPECT_NEAR(grid.samples[1].t, T / 3.0, 1e-12);
  const Mat2 hop = propagate_interval(lab(p), T / 3.0, 2.0 * T / 3.0, grid.total_steps / 3);
  EXPECT_LT(oracle::max_diff(hop * u13, u23), 10.0 * std::max(grid.max_unitarity_error, 1e-14));
}

TEST(Propagate, FourthOrderConvergence) {
  const DriveParams p = DriveParams::in_omega_units(3.0, 2.0);
  const Mat2 ref = propagate(lab(p), p, {1e-6, 1, 1}).final_u();
  const double e1 = oracle::max_diff(propagate(lab(p), p, {1e-2, 1, 1}).final_u(), ref);
  const double e2 = oracle::max_diff(propagate(lab(p), p, {5e-3, 1, 1}).final_u(), ref);
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 14.0);
  EXPECT_LT(ratio, 18.0);
}

TEST(Propagate, FloquetPeriodicity) {
  const DriveParams p = DriveParams::in_omega_units(1.3, 1.5);
  const auto one = propagate(lab(p), p, {1e-4, 1, 8});
  const auto two = propagate(lab(p), p, {1e-4, 2, 16});
  EXPECT_LT(oracle::max_diff(two.final_u(), one.final_u() * one.final_u()), 1e-10);
  EXPECT_LT(oracle::max_diff(two.samples[8].u, one.final_u()), 1e-12);
}

TEST(Propagate, OperatorMatchesColumnwiseStateIntegration) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  const auto grid = propagate(lab(p), p, {1e-3, 1, 1});
  const auto h = lab(p);
  const double dt = grid.dt;
  const auto deriv = [&](double t, const Spinor2& v) { return Complex(0.0, -1.0) * (h(t) * v); };
  const auto scaled = [](double s, const Spinor2& v) { return Spinor2{s * v.c1, s * v.c2}; };
  for (int col = 0; col < 2; ++col) {
    Spinor2 v = col == 0 ? Spinor2{1.0, 0.0} : Spinor2{0.0, 1.0};
    for (long k = 0; k < grid.total_steps; ++k) {
      const double t = k * dt;
      const Spinor2 k1 = deriv(t, v);
      const Spinor2 k2 = deriv(t + dt / 2, v + scaled(dt / 2, k1));
      const Spinor2 k3 = deriv(t + dt / 2, v + scaled(dt / 2, k2));
      const Spinor2 k4 = deriv((k + 1) * dt, v + scaled(dt, k3));
      v = v + scaled(dt / 6, k1 + scaled(2.0, k2) + scaled(2.0, k3) + k4);
    }
    EXPECT_LT(std::abs(v.c1 - grid.final_u()(0, col)), 1e-13);
    EXPECT_LT(std::abs(v.c2 - grid.final_u()(1, col)), 1e-13);
  }
}

TEST(EvolveState, Examples) {
  const DriveParams p{1.0, 0.0, 1.0};
  const auto ident = propagate([](double) { return Mat2::zero(); }, p, {1e-3, 1, 8});
  const Spinor2 psi0 = Spinor2{0.6, Complex(0.0, 0.8)};
  for (const auto& s : evolve_state(ident, psi0)) {
    EXPECT_LT(std::abs(s.psi.c1 - psi0.c1) + std::abs(s.psi.c2 - psi0.c2), 1e-15);
  }
  const auto zgrid = propagate([](double) { return 0.5 * kSigmaZ; }, p, {1e-3, 1, 8});
  for (const auto& s : evolve_state(zgrid, {1.0, 0.0})) {
    EXPECT_NEAR(std::abs(s.psi.c1), 1.0, 1e-12);
    EXPECT_LT(std::abs(s.psi.c2), 1e-15);
  }
}

TEST(EvolveState, ExactCyclicStateCloses) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  const auto grid = propagate(lab(p), p, {1e-5, 1, 256});
  for (const auto& e : eigensystem_unitary2(grid.final_u())) {
    const auto states = evolve_state(grid, e.vector);
    EXPECT_GE(std::abs(inner(states.front().psi, states.back().psi)), 1.0 - 1e-8);
    for (const auto& s : states) EXPECT_NEAR(s.psi.norm(), 1.0, 1e-11);
  }
}

TEST(GridEvolver, OffGridTimesMatchDirectPropagation) {
  const DriveParams p = DriveParams::in_omega_units(2.0, 1.0);
  const auto grid = propagate(lab(p), p, {1e-4, 1, 16});
  const GridEvolver ev(grid, lab(p));
  EXPECT_LT(oracle::max_diff(ev.propagator_at(grid.samples[5].t), grid.samples[5].u), 1e-16);
  const double t = 0.4321 * p.period();
  const Mat2 direct = propagate_interval(lab(p), 0.0, t, 30000);
  EXPECT_LT(oracle::max_diff(ev.propagator_at(t), direct), 1e-11);
}

TEST(Bloch, CardinalStates) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto n = bloch_vector({1.0, 0.0});
  EXPECT_EQ(n[0], 0.0);
  EXPECT_EQ(n[1], 0.0);
  EXPECT_EQ(n[2], 1.0);
  const auto x = bloch_vector({r, r});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
  EXPECT_NEAR(x[2], 0.0, 1e-15);
  const auto y = bloch_vector({r, Complex(0.0, r)});
  EXPECT_NEAR(y[0], 0.0, 1e-15);
  EXPECT_NEAR(y[1], 1.0, 1e-15);
  EXPECT_NEAR(y[2], 0.0, 1e-15);
}

TEST(Bloch, TrajectoryStaysOnSphereAndMatchesExpectations) {
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  const auto grid = propagate(lab(p), p, {1e-4, 1, 64});
  const auto states = evolve_state(grid, instantaneous_eigenstate(p, 0.0, Branch::plus));
  const BlochTrajectory traj = bloch_trajectory(states, p);
  ASSERT_EQ(traj.points.size(), states.size());
  EXPECT_EQ(traj.points.back().t_over_t_period, 1.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& pt = traj.points[i];
    EXPECT_NEAR(pt.sx * pt.sx + pt.sy * pt.sy + pt.sz * pt.sz, 1.0, 1e-9);
    EXPECT_NEAR(pt.sx, expectation(states[i].psi, kSigmaX, states[i].psi).real(), 1e-12);
    EXPECT_NEAR(pt.sy, expectation(states[i].psi, kSigmaY, states[i].psi).real(), 1e-12);
    EXPECT_LT(std::abs(expectation(states[i].psi, kSigmaY, states[i].psi).imag()), 1e-12);
  }
}

TEST(Bloch, CsvFormat) {
  BlochTrajectory traj;
  traj.points.push_back({0.0, 0.0, 0.0, 1.0});
  traj.points.push_back({0.5, 0.123456789012345, -0.5, 1.0 / 3.0});
  std::ostringstream os;
  write_bloch_csv(os, traj);
  EXPECT_EQ(os.str(), "t_over_T,sx,sy,sz\n0,0,0,1\n0.5,0.123456789012,-0.5,0.333333333333\n");
}

TEST(InstantaneousEigenstate, Examples) {
  const DriveParams undriven{1.0, 0.0, 1.0};
  EXPECT_NEAR(oracle::overlap(instantaneous_eigenstate(undriven, 0.3, Branch::plus), {1.0, 0.0}), 1.0, 1e-15);
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  EXPECT_NEAR(oracle::overlap(instantaneous_eigenstate(p, p.period() / 4.0, Branch::minus), {0.0, 1.0}), 1.0, 1e-15);
  const auto ref = oracle::char_poly_eigen(hamiltonian_lab(p, 0.0));
  const auto& upper = ref[0].value.real() > ref[1].value.real() ? ref[0] : ref[1];
  const Spinor2 plus = instantaneous_eigenstate(p, 0.0, Branch::plus);
  EXPECT_NEAR(oracle::overlap(plus, upper.vector), 1.0, 1e-14);
  EXPECT_NEAR(plus.norm(), 1.0, 1e-15);
  EXPECT_THROW(instantaneous_eigenstate(DriveParams{0.0, 0.0, 1.0}, 0.0, Branch::plus), DegenerateError);
  EXPECT_THROW(adiabaticity_ratio(DriveParams{0.0, 0.0, 1.0}, 0.0), DegenerateError);
}

TEST(AdiabaticityRatio, Examples) {
  const DriveParams undriven{1.0, 0.0, 1.0};
  EXPECT_EQ(adiabaticity_ratio(undriven, 0.4), 0.0);
  const DriveParams p = DriveParams::in_omega_units(2.9, 1.0);
  EXPECT_EQ(adiabaticity_ratio(p, 0.0), 0.0);
  const double q = adiabaticity_ratio(p, p.period() / 4.0);
  // At T/4: H = (delta/2) sz, dH/dt = -(A omega / 2) sx, gap delta.
  EXPECT_NEAR(q, 0.5 / (2.9 * 2.9), 1e-14);
  EXPECT_GT(q, 0.0);
  EXPECT_LT(q, 0.1);
}
