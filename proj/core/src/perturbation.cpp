#include "rabiphase/perturbation.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rabiphase/bessel.hpp"
#include "rabiphase/errors.hpp"
#include "rabiphase/quadrature.hpp"

namespace rabiphase {

namespace {

double sinc(double y) { return std::abs(y) < 1e-4 ? 1.0 - y * y / 6.0 : std::sin(y) / y; }

double half_angle(const DriveParams& p, const RenormParams& r) { return 0.5 * r.rabi_tilde * p.period(); }

void require_off_pole(const DriveParams& p, const RenormParams& r, const char* who) {
  if (std::abs(r.rabi_tilde - 2.0 * p.omega) < kPoleTolerance * p.omega) {
    throw PoleError(std::string(who) + ": rabi_tilde = 2 omega, use the k0 limit");
  }
}

// -(detuning / rabi) sx + (a_tilde / 2 rabi) sz
Mat2 correction_axis(const RenormParams& r) {
  return (-r.detuning_tilde / r.rabi_tilde) * kSigmaX + (0.5 * r.a_tilde / r.rabi_tilde) * kSigmaZ;
}

double k_numerator(const DriveParams& p, const RenormParams& r, bool include_h3) {
  double n = p.delta * bessel_j(2, r.z) * r.a_tilde;
  if (include_h3) n -= p.delta * bessel_j(3, r.z) * (r.rabi_tilde + r.detuning_tilde);
  return n;
}

}  // namespace

PerturbationK combined_k(const DriveParams& p, const RenormParams& r, bool include_h3) {
  PerturbationK out;
  out.includes_h3 = include_h3;
  out.pole_distance = r.rabi_tilde - 2.0 * p.omega;
  out.k0 = k_numerator(p, r, include_h3) / (r.rabi_tilde + 2.0 * p.omega);
  out.at_pole = std::abs(out.pole_distance) < kPoleTolerance * p.omega;
  if (out.at_pole) {
    out.k = out.k0 == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), out.k0);
  } else {
    out.k = out.k0 / out.pole_distance;
  }
  return out;
}

Mat2 u1z_at_T(const DriveParams& p, const RenormParams& r) {
  require_off_pole(p, r, "u1z_at_T");
  const double denom = r.rabi_tilde * r.rabi_tilde - 4.0 * p.omega * p.omega;
  const double c = p.delta * bessel_j(2, r.z) * r.a_tilde * std::sin(half_angle(p, r)) / denom;
  return Complex(0.0, c) * correction_axis(r);
}

Mat2 u1y_at_T(const DriveParams& p, const RenormParams& r) {
  require_off_pole(p, r, "u1y_at_T");
  const double denom = r.rabi_tilde * r.rabi_tilde - 4.0 * p.omega * p.omega;
  const double c =
      -p.delta * bessel_j(3, r.z) * (r.rabi_tilde + r.detuning_tilde) * std::sin(half_angle(p, r)) / denom;
  return Complex(0.0, c) * correction_axis(r);
}

Mat2 u1y_at_T_unnormalized_form(const DriveParams& p, const RenormParams& r) {
  require_off_pole(p, r, "u1y_at_T");
  const double denom = r.rabi_tilde * (r.rabi_tilde * r.rabi_tilde - 4.0 * p.omega * p.omega);
  const double c =
      -p.delta * bessel_j(3, r.z) * (r.rabi_tilde + r.detuning_tilde) * std::sin(half_angle(p, r)) / denom;
  return Complex(0.0, c) * ((-r.detuning_tilde) * kSigmaX + (0.5 * r.a_tilde) * kSigmaZ);
}

PerturbedPropagator perturbed_u_at_T(const DriveParams& p, const RenormParams& r, bool include_h3) {
  PerturbedPropagator out;
  out.k = combined_k(p, r, include_h3);
  const double x = half_angle(p, r);
  // k sin(x) = k0 sin(pi d / omega) / d with d the pole distance, finite at d = 0.
  const double y = kPi * out.k.pole_distance / p.omega;
  const double k_sin = out.k.k0 * (kPi / p.omega) * sinc(y);
  const double s = std::sin(x);
  const double ax = (s * 0.5 * r.a_tilde - k_sin * r.detuning_tilde) / r.rabi_tilde;
  const double az = (s * r.detuning_tilde + k_sin * 0.5 * r.a_tilde) / r.rabi_tilde;
  out.raw = pauli_combination(-std::cos(x), Complex(0.0, ax), 0.0, Complex(0.0, az));
  const PolarResult pr = polar_project(out.raw);
  out.unitary = pr.unitary;
  out.projection_distance = pr.distance;
  return out;
}

std::pair<Spinor2, Spinor2> perturbed_cyclic_states(const DriveParams& p, const RenormParams& r, bool include_h3) {
  const PerturbationK k = combined_k(p, r, include_h3);
  const double half_a = 0.5 * r.a_tilde;
  const double det = r.detuning_tilde;
  double nx;
  double nz;
  if (std::abs(k.k) <= 1.0) {
    nx = half_a - k.k * det;
    nz = det + k.k * half_a;
  } else {
    const double u = 1.0 / k.k;
    const double sg = std::signbit(k.k) ? -1.0 : 1.0;
    nx = sg * (u * half_a - det);
    nz = sg * (u * det + half_a);
  }
  const double len = std::hypot(nx, nz);
  if (!(len > 0.0)) throw DegenerateError("perturbed_cyclic_states: vanishing rotation axis");
  nx /= len;
  nz /= len;
  // -1 eigenvector of nx sx + nz sz in its better-conditioned orientation.
  const Spinor2 plus = nz <= 0.0 ? Spinor2{1.0 - nz, -nx}.normalized()
                                 : Spinor2{std::abs(nx), -(nx < 0.0 ? -1.0 : 1.0) * (1.0 + nz)}.normalized();
  return {plus, Spinor2{-plus.c2, plus.c1}};
}

PhaseWeights perturbed_phase_weights(const PerturbationK& k) {
  if (k.at_pole) return {0.0, 0.0};
  if (std::abs(k.k) <= 1.0) {
    const double root = std::sqrt(1.0 + k.k * k.k);
    return {1.0 / root, k.k / root};
  }
  const double u = 1.0 / k.k;
  const double root = std::sqrt(1.0 + u * u);
  return {std::abs(u) / root, (std::signbit(k.k) ? -1.0 : 1.0) / root};
}

ChrwPhases perturbed_phases(const DriveParams& p, const RenormParams& r, bool include_h3) {
  const ChrwPhases base = chrw_phases(p, r);
  const PerturbationK k = combined_k(p, r, include_h3);
  const PhaseWeights w = perturbed_phase_weights(k);
  ChrwPhases out = base;
  if (w.dynamic != 1.0 || w.correction != 0.0) {
    // sin(rabi T) / (rabi^2 - 4 omega^2) = T sinc(d T) / (rabi + 2 omega)
    const double T = p.period();
    const double ratio = T * sinc(k.pole_distance * T) / (r.rabi_tilde + 2.0 * p.omega);
    const double corr = (0.25 * p.amplitude - 0.125 * r.a_tilde) * (2.0 * p.omega - r.detuning_tilde) * ratio;
    out.gamma_plus = base.theta_plus - w.dynamic * base.alpha_plus - w.correction * corr;
    out.alpha_plus = base.theta_plus - out.gamma_plus;
  }
  const PerturbedQuasienergies q = perturbed_quasienergies(p, r, include_h3);
  out.q_plus = q.q_plus;
  out.theta_minus = -out.theta_plus;
  out.alpha_minus = -out.alpha_plus;
  out.gamma_minus = -out.gamma_plus;
  out.q_minus = q.q_minus;
  return out;
}

double perturbed_dynamic_phase_quadrature(const DriveParams& p, const RenormParams& r, bool include_h3,
                                          DynamicPhaseIntegrand integrand, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw DomainError("dynamic phase quadrature: intervals must be even");
  const Spinor2 plus = perturbed_cyclic_states(p, r, include_h3).first;
  const double T = p.period();
  const double h = T / intervals;
  std::vector<double> energy(static_cast<std::size_t>(intervals) + 1);

  Mat2 running = Mat2::zero();  // int_0^t U0^-1 H' U0, cumulative trapezoid
  Mat2 prev_integrand = Mat2::zero();
  for (int i = 0; i <= intervals; ++i) {
    const double t = i * h;
    const Mat2 u0 = u0_analytic(r, p, t);
    Mat2 u = u0;
    if (integrand == DynamicPhaseIntegrand::corrected_propagator) {
      Mat2 hp = harmonic_term(p, r, 2, t);
      if (include_h3) hp += harmonic_term(p, r, 3, t);
      const Mat2 cur = dagger(u0) * hp * u0;
      if (i > 0) running += (0.5 * h) * (prev_integrand + cur);
      prev_integrand = cur;
      u = u0 + Complex(0.0, -1.0) * (u0 * running);
    }
    const Spinor2 psi = (exp_minus_s(p, r, t) * (u * plus)).normalized();
    energy[static_cast<std::size_t>(i)] = expectation(psi, hamiltonian_lab(p, t), psi).real();
  }
  return -simpson(energy, h);
}

double quasienergy_gap(double q1, double q2, double omega) {
  const double d = std::fmod(std::abs(q1 - q2), omega);
  return std::min(d, omega - d);
}

PerturbedQuasienergies perturbed_quasienergies(const DriveParams& p, const RenormParams& r, bool include_h3) {
  const PerturbationK k = combined_k(p, r, include_h3);
  PerturbedQuasienergies out;
  const double d = k.pole_distance;
  out.pole_window = std::abs(d) < kPoleWindow * p.omega;
  // sqrt(1 + k^2) d written through k0 so it stays finite at the pole.
  const double split = out.pole_window ? std::abs(k.k0) : std::copysign(std::hypot(d, k.k0), d);
  out.q_plus = fold_quasienergy(-0.5 * split + 0.5 * p.omega, p.omega);
  out.q_minus = -out.q_plus;
  out.rabi_p = 2.0 * p.omega + split;
  out.gap = quasienergy_gap(out.q_plus, out.q_minus, p.omega);
  return out;
}

double resonance_point_closed_form(const DriveParams& p) {
  const double a = p.amplitude / p.omega;
  return (3.0 - 3.0 * a * a / 32.0) * p.omega;
}

double resonance_point_solve(const DriveParams& p, int n) {
  if (n < 1) throw DomainError("resonance_point_solve: n must be >= 1");
  const double target = 2.0 * n * p.omega;
  const auto f = [&](double delta) {
    const DriveParams q{delta, p.amplitude, p.omega};
    return solve_xi(q).rabi_tilde - target;
  };
  const double lo = (2.0 * n + 0.5) * p.omega;
  const double hi = (2.0 * n + 1.5) * p.omega;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw NotFoundError("resonance_point_solve: no root of rabi_tilde = 2 n omega in the bracket");
  }
  const auto collapse = [](double a, double b) { return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b); };
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, collapse, iterations);
  const double fa = f(a);
  const double fb = f(b);
  const double best = std::abs(fa) <= std::abs(fb) ? a : b;
  if (std::min(std::abs(fa), std::abs(fb)) > 1e-12 * p.omega) {
    throw NotFoundError("resonance_point_solve: residual above 1e-12 omega");
  }
  return best;
}

double slope_closed_form(const DriveParams& p) {
  if (p.amplitude == 0.0) throw DomainError("slope_closed_form: requires A > 0");
  const double r = p.omega / p.amplitude;
  return 3.0 * kPi * (128.0 * r * r * r - 63.0 / 8.0 * r);
}

double gap_closed_form(const DriveParams& p) {
  const double a = p.amplitude / p.omega;
  return a * a * a / 128.0 * (1.0 + 17.0 * a * a / 2048.0);
}

double k0_small_drive(const DriveParams& p, double delta_res) {
  const double a = p.amplitude;
  const double w = p.omega;
  return delta_res * a * a * a * (11.0 * delta_res - w) / (192.0 * w * std::pow(w + delta_res, 3));
}

double resonance_shift_x(const DriveParams& p) {
  const double a = p.amplitude / p.omega;
  return 3.0 * a * a / 32.0;
}

ResonanceReport closed_form_report(const DriveParams& p) {
  ResonanceReport rep;
  rep.harmonic_order = 1;
  rep.delta_res = resonance_point_closed_form(p) / p.omega;
  rep.gap = gap_closed_form(p);
  rep.slope = p.amplitude > 0.0 ? slope_closed_form(p) : std::numeric_limits<double>::infinity();
  rep.x = resonance_shift_x(p);
  rep.engine = ResonanceEngine::closed_form;
  return rep;
}

}  // namespace rabiphase
