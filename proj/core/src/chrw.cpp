#include "rabiphase/chrw.hpp"

#include <cmath>

#include "rabiphase/errors.hpp"

namespace rabiphase {

ChrwSymbols ChrwSymbols::from(const DriveParams& p, const RenormParams& r) {
  return {r.a_tilde, r.delta_tilde, r.detuning_tilde, r.rabi_tilde, p.amplitude, p.omega};
}

double fold_quasienergy(double q, double omega) { return q - omega * std::ceil(q / omega - 0.5); }

Mat2 u0_analytic(const RenormParams& r, const DriveParams& p, double t) {
  const double x = 0.5 * r.rabi_tilde * t;
  const double c = std::cos(x);
  const double s = r.rabi_tilde > 0.0 ? std::sin(x) / r.rabi_tilde : 0.5 * t;
  const Complex em = std::exp(Complex(0.0, -0.5 * p.omega * t));
  const Complex ep = std::conj(em);
  const Complex off = Complex(0.0, -0.5 * r.a_tilde * s);
  return {em * Complex(c, -r.detuning_tilde * s), em * off, ep * off, ep * Complex(c, r.detuning_tilde * s)};
}

namespace {

std::pair<Spinor2, Spinor2> cyclic_pair(double a_tilde, double detuning, double rabi) {
  if (!(rabi > 0.0)) throw DegenerateError("cyclic states undefined at zero Rabi frequency");
  if (detuning <= 0.0) {
    // rabi - detuning >= rabi, so |+> is well conditioned.
    const Spinor2 plus = Spinor2{rabi - detuning, -0.5 * a_tilde}.normalized();
    return {plus, Spinor2{-plus.c2, plus.c1}};
  }
  const Spinor2 minus = Spinor2{rabi + detuning, 0.5 * a_tilde}.normalized();
  return {Spinor2{minus.c2, -minus.c1}, minus};
}

}  // namespace

std::pair<Spinor2, Spinor2> chrw_cyclic_states(const RenormParams& r) {
  return cyclic_pair(r.a_tilde, r.detuning_tilde, r.rabi_tilde);
}

ChrwPhases chrw_phases_from_symbols(const ChrwSymbols& s) {
  if (!(s.rabi_tilde > 0.0)) throw DegenerateError("chrw_phases: zero Rabi frequency");
  const double period = kTwoPi / s.omega;
  ChrwPhases out;
  out.theta_plus = 0.5 * (s.rabi_tilde - s.omega) * period;
  out.alpha_plus = (s.delta_tilde * s.detuning_tilde / (2.0 * s.rabi_tilde) +
                    s.a_tilde * s.a_tilde / (16.0 * s.rabi_tilde) + s.a_tilde * s.amplitude / (8.0 * s.rabi_tilde)) *
                   period;
  out.gamma_plus = out.theta_plus - out.alpha_plus;
  out.q_plus = fold_quasienergy(-0.5 * (s.rabi_tilde - s.omega), s.omega);
  out.theta_minus = -out.theta_plus;
  out.alpha_minus = -out.alpha_plus;
  out.gamma_minus = -out.gamma_plus;
  out.q_minus = -out.q_plus;
  return out;
}

ChrwPhases chrw_phases(const DriveParams& p, const RenormParams& r) {
  return chrw_phases_from_symbols(ChrwSymbols::from(p, r));
}

double rwa_geometric_phase_form(double detuning, double rabi) { return (1.0 - detuning / rabi) * kPi; }

double rwa_rabi_frequency(const DriveParams& p) {
  const double detuning = p.delta - p.omega;
  return std::sqrt(detuning * detuning + 0.25 * p.amplitude * p.amplitude);
}

ChrwPhases rwa_phases(const DriveParams& p) {
  const double detuning = p.delta - p.omega;
  const double rabi = rwa_rabi_frequency(p);
  if (!(rabi > 0.0)) throw DegenerateError("rwa_phases: zero Rabi frequency");
  ChrwPhases out;
  out.theta_plus = 0.5 * (rabi - p.omega) * p.period();
  out.gamma_plus = rwa_geometric_phase_form(detuning, rabi);
  out.alpha_plus = out.theta_plus - out.gamma_plus;
  out.q_plus = fold_quasienergy(-0.5 * (rabi - p.omega), p.omega);
  out.theta_minus = -out.theta_plus;
  out.alpha_minus = -out.alpha_plus;
  out.gamma_minus = -out.gamma_plus;
  out.q_minus = -out.q_plus;
  return out;
}

std::pair<Spinor2, Spinor2> rwa_cyclic_states(const DriveParams& p) {
  return cyclic_pair(p.amplitude, p.delta - p.omega, rwa_rabi_frequency(p));
}

}  // namespace rabiphase
