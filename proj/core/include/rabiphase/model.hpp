#pragma once

// Semiclassical Rabi model: lab-frame Hamiltonian, the xi-parametrized unitary
// transformation, its harmonic decomposition, and the self-consistent xi solver.

#include <functional>
#include <vector>

#include "rabiphase/linalg2.hpp"

namespace rabiphase {

/// Labels the two Floquet (or instantaneous) branches.
enum class Branch { plus, minus };

/// Physical drive: transition frequency delta, amplitude A, frequency omega.
struct DriveParams {
  double delta = 1.0;
  double amplitude = 0.0;
  double omega = 1.0;

  double period() const { return kTwoPi / omega; }

  /// Parameters expressed in units of omega (omega = 1).
  static DriveParams in_omega_units(double delta_over_omega, double a_over_omega) {
    return {delta_over_omega, a_over_omega, 1.0};
  }

  /// Throws DomainError unless delta > 0, A >= 0, omega > 0, all finite.
  void validate() const;
};

/// Quantities fixed by the self-consistency condition.
struct RenormParams {
  double xi = 0.0;
  double z = 0.0;               // A xi / omega
  double a_tilde = 0.0;         // 2 A (1 - xi)
  double delta_tilde = 0.0;     // delta J0(z)
  double detuning_tilde = 0.0;  // delta_tilde - omega
  double rabi_tilde = 0.0;      // sqrt(detuning_tilde^2 + a_tilde^2 / 4)
  double residual = 0.0;        // J1(z) delta - A (1 - xi) / 2
  bool outside_validity = false;  // A / omega > 4
};

/// Builds the derived fields from xi by their defining formulas.
RenormParams renorm_from_xi(const DriveParams& p, double xi);

/// Solves J1(A xi / omega) delta = A (1 - xi) / 2 for xi in [0, 1] by bisection.
/// A = 0 returns the continuum limit xi = omega / (omega + delta).
/// Throws NoSolutionError without a sign change, MultipleRootsError if the
/// bracket holds more than one root.
RenormParams solve_xi(const DriveParams& p, double tol = 1e-14);

/// Sign-change scan of the self-consistency function on `grid_points` nodes of [0, 1].
/// Returns one bracketed root estimate per sign change.
std::vector<double> scan_xi_roots(const DriveParams& p, int grid_points = 1000);

using HamiltonianFn = std::function<Mat2(double)>;

/// (delta/2) sz + (A/2) cos(omega t) sx
Mat2 hamiltonian_lab(const DriveParams& p, double t);

/// e^S H e^-S - i e^S d/dt e^-S written in closed form.
Mat2 hamiltonian_transformed(const DriveParams& p, const RenormParams& r, double t);

/// Zeroth and first harmonics of the transformed Hamiltonian before the xi condition is imposed:
/// (delta/2) J0 sz + (A/2)(1 - xi) cos(wt) sx + delta J1 sin(wt) sy.
Mat2 hamiltonian_h0(const DriveParams& p, const RenormParams& r, double t);

/// RWA-form Hamiltonian with renormalized parameters:
/// (delta_tilde/2) sz + (a_tilde/4)(e^{-iwt} s+ + e^{iwt} s-).
Mat2 hamiltonian_chrw(const DriveParams& p, const RenormParams& r, double t);

enum class HarmonicAxis { z, y };

struct HarmonicTerm {
  int order = 2;
  double coefficient = 0.0;  // delta J_n(z)
  HarmonicAxis axis = HarmonicAxis::z;
};

/// Even n: delta J_n cos(n w t) sz. Odd n: delta J_n sin(n w t) sy. Requires n >= 2.
HarmonicTerm harmonic_descriptor(const DriveParams& p, const RenormParams& r, int n);
Mat2 harmonic_term(const DriveParams& p, const RenormParams& r, int n, double t);

/// Generator S(t) = i (A / 2 omega) xi sin(omega t) sx.
Mat2 generator_s(const DriveParams& p, const RenormParams& r, double t);

/// e^{S(t)} and e^{-S(t)} in closed form (S is i * real * sx).
Mat2 exp_s(const DriveParams& p, const RenormParams& r, double t);
Mat2 exp_minus_s(const DriveParams& p, const RenormParams& r, double t);

}  // namespace rabiphase
