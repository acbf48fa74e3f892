#include "rabiphase/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabiphase/bessel.hpp"
#include "rabiphase/errors.hpp"

namespace rabiphase {

void DriveParams::validate() const {
  if (!std::isfinite(delta) || !std::isfinite(amplitude) || !std::isfinite(omega)) {
    throw DomainError("DriveParams: non-finite parameter");
  }
  if (delta <= 0.0) throw DomainError("DriveParams: delta must be > 0");
  if (amplitude < 0.0) throw DomainError("DriveParams: amplitude must be >= 0");
  if (omega <= 0.0) throw DomainError("DriveParams: omega must be > 0");
}

namespace {

double xi_condition(const DriveParams& p, double xi) {
  return bessel_j(1, p.amplitude * xi / p.omega) * p.delta - 0.5 * p.amplitude * (1.0 - xi);
}

}  // namespace

RenormParams renorm_from_xi(const DriveParams& p, double xi) {
  RenormParams r;
  r.xi = xi;
  r.z = p.amplitude * xi / p.omega;
  r.a_tilde = 2.0 * p.amplitude * (1.0 - xi);
  r.delta_tilde = p.delta * bessel_j(0, r.z);
  r.detuning_tilde = r.delta_tilde - p.omega;
  r.rabi_tilde = std::sqrt(r.detuning_tilde * r.detuning_tilde + 0.25 * r.a_tilde * r.a_tilde);
  r.residual = xi_condition(p, xi);
  r.outside_validity = p.amplitude / p.omega > 4.0;
  return r;
}

std::vector<double> scan_xi_roots(const DriveParams& p, int grid_points) {
  std::vector<double> roots;
  double x0 = 0.0;
  double f0 = xi_condition(p, x0);
  for (int i = 1; i < grid_points; ++i) {
    const double x1 = static_cast<double>(i) / (grid_points - 1);
    const double f1 = xi_condition(p, x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
      roots.push_back(x0 - f0 * (x1 - x0) / (f1 - f0));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

RenormParams solve_xi(const DriveParams& p, double tol) {
  p.validate();
  if (tol < 1e-14) throw DomainError("solve_xi: tol must be >= 1e-14");
  if (p.amplitude == 0.0) return renorm_from_xi(p, p.omega / (p.omega + p.delta));

  const std::vector<double> roots = scan_xi_roots(p, 65);
  if (roots.empty()) throw NoSolutionError("solve_xi: no sign change of the xi condition on [0, 1]");
  if (roots.size() > 1) throw MultipleRootsError("solve_xi: xi condition has several roots", roots);

  double lo = 0.0;
  double hi = 1.0;
  double f_lo = xi_condition(p, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = xi_condition(p, mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double best = std::abs(xi_condition(p, lo)) <= std::abs(xi_condition(p, hi)) ? lo : hi;
  RenormParams r = renorm_from_xi(p, best);
  if (std::abs(r.residual) > tol * std::max({1.0, p.delta / p.omega, p.amplitude / p.omega})) {
    throw NoSolutionError("solve_xi: bisection stalled with residual " + std::to_string(r.residual));
  }
  return r;
}

Mat2 hamiltonian_lab(const DriveParams& p, double t) {
  const double hz = 0.5 * p.delta;
  const double hx = 0.5 * p.amplitude * std::cos(p.omega * t);
  return {hz, hx, hx, -hz};
}

Mat2 hamiltonian_transformed(const DriveParams& p, const RenormParams& r, double t) {
  const double phase = r.z * std::sin(p.omega * t);
  const double hz = 0.5 * p.delta * std::cos(phase);
  const double hy = 0.5 * p.delta * std::sin(phase);
  const double hx = 0.5 * p.amplitude * (1.0 - r.xi) * std::cos(p.omega * t);
  return pauli_combination(0.0, hx, hy, hz);
}

Mat2 hamiltonian_h0(const DriveParams& p, const RenormParams& r, double t) {
  const double hz = 0.5 * p.delta * bessel_j(0, r.z);
  const double hx = 0.5 * p.amplitude * (1.0 - r.xi) * std::cos(p.omega * t);
  const double hy = p.delta * bessel_j(1, r.z) * std::sin(p.omega * t);
  return pauli_combination(0.0, hx, hy, hz);
}

Mat2 hamiltonian_chrw(const DriveParams& p, const RenormParams& r, double t) {
  const double hz = 0.5 * r.delta_tilde;
  const Complex off = 0.25 * r.a_tilde * std::exp(Complex(0.0, -p.omega * t));
  return {hz, off, std::conj(off), -hz};
}

HarmonicTerm harmonic_descriptor(const DriveParams& p, const RenormParams& r, int n) {
  if (n < 2) throw DomainError("harmonic_term: order must be >= 2 (orders 0 and 1 are in the RWA part)");
  return {n, p.delta * bessel_j(n, r.z), n % 2 == 0 ? HarmonicAxis::z : HarmonicAxis::y};
}

Mat2 harmonic_term(const DriveParams& p, const RenormParams& r, int n, double t) {
  const HarmonicTerm h = harmonic_descriptor(p, r, n);
  const double arg = n * p.omega * t;
  if (h.axis == HarmonicAxis::z) return (h.coefficient * std::cos(arg)) * kSigmaZ;
  return (h.coefficient * std::sin(arg)) * kSigmaY;
}

Mat2 generator_s(const DriveParams& p, const RenormParams& r, double t) {
  const double s = 0.5 * p.amplitude / p.omega * r.xi * std::sin(p.omega * t);
  return Complex(0.0, s) * kSigmaX;
}

Mat2 exp_s(const DriveParams& p, const RenormParams& r, double t) {
  const double s = 0.5 * p.amplitude / p.omega * r.xi * std::sin(p.omega * t);
  return {std::cos(s), Complex(0.0, std::sin(s)), Complex(0.0, std::sin(s)), std::cos(s)};
}

Mat2 exp_minus_s(const DriveParams& p, const RenormParams& r, double t) {
  const double s = 0.5 * p.amplitude / p.omega * r.xi * std::sin(p.omega * t);
  return {std::cos(s), Complex(0.0, -std::sin(s)), Complex(0.0, -std::sin(s)), std::cos(s)};
}

}  // namespace rabiphase
