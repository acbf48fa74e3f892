#pragma once

// First-order corrections from the 2nd and 3rd harmonics on top of the CHRW
// propagator, plus the closed-form laws for the 3rd-harmonic resonance.

#include <utility>

#include "rabiphase/chrw.hpp"
#include "rabiphase/linalg2.hpp"
#include "rabiphase/model.hpp"

namespace rabiphase {

/// Distance from the 3rd-harmonic pole below which u1z/u1y refuse to evaluate.
inline constexpr double kPoleTolerance = 1e-10;
/// Window |rabi - 2 omega| < this * omega where quasienergies switch to the k0 form.
inline constexpr double kPoleWindow = 1e-6;

/// k = k0 / (rabi - 2 omega). At the pole k is a signed infinity and k0 stays finite.
struct PerturbationK {
  double k = 0.0;
  double k0 = 0.0;
  bool includes_h3 = true;
  bool at_pole = false;
  double pole_distance = 0.0;  // rabi_tilde - 2 omega
};

PerturbationK combined_k(const DriveParams& p, const RenormParams& r, bool include_h3);

/// -i U0(T) int_0^T U0^-1 H2 U0, closed form. Throws PoleError within kPoleTolerance of rabi = 2 omega.
Mat2 u1z_at_T(const DriveParams& p, const RenormParams& r);

/// The same correction from H3 under the near-resonance approximation.
Mat2 u1y_at_T(const DriveParams& p, const RenormParams& r);

/// u1y written with the unnormalized Pauli coefficients and rabi (rabi^2 - 4 omega^2)
/// in the denominator. Algebraically identical to u1y_at_T.
Mat2 u1y_at_T_unnormalized_form(const DriveParams& p, const RenormParams& r);

struct PerturbedPropagator {
  Mat2 raw;       // U0(T) + U1(T), not exactly unitary
  Mat2 unitary;   // polar projection of raw
  double projection_distance = 0.0;
  PerturbationK k;
};

/// Finite at the pole: k sin(rabi T / 2) is evaluated through its k0 limit.
PerturbedPropagator perturbed_u_at_T(const DriveParams& p, const RenormParams& r, bool include_h3);

/// |+> is the -1 eigenvector of the corrected rotation axis. For |k| > 1 the axis is
/// built from 1/k; at the pole the k -> sign(k0) infinity limit is used.
std::pair<Spinor2, Spinor2> perturbed_cyclic_states(const DriveParams& p, const RenormParams& r, bool include_h3);

/// Weights of the CHRW dynamic phase and of the sin(rabi T) correction in the perturbed
/// geometric phase: 1/sqrt(1+k^2) and k/sqrt(1+k^2). Both are set to 0 exactly at the pole.
struct PhaseWeights {
  double dynamic = 1.0;
  double correction = 0.0;
};
PhaseWeights perturbed_phase_weights(const PerturbationK& k);

/// Closed-form phases. theta is the CHRW value; q is taken from perturbed_quasienergies.
ChrwPhases perturbed_phases(const DriveParams& p, const RenormParams& r, bool include_h3);

enum class DynamicPhaseIntegrand { chrw_propagator, corrected_propagator };

/// alpha_+ = -int_0^T <psi|H_lab|psi> by Simpson, psi(t) = e^{-S} U(t) |+> with U = U0
/// or U0 + U1 (normalized). Validates the closed form.
double perturbed_dynamic_phase_quadrature(const DriveParams& p, const RenormParams& r, bool include_h3,
                                          DynamicPhaseIntegrand integrand, int intervals = 20000);

struct PerturbedQuasienergies {
  double q_plus = 0.0;
  double q_minus = 0.0;
  double rabi_p = 0.0;  // 2 omega + sqrt(1+k^2)(rabi - 2 omega)
  double gap = 0.0;     // shortest arc between q+ and q- on the circle of length omega
  bool pole_window = false;
};

PerturbedQuasienergies perturbed_quasienergies(const DriveParams& p, const RenormParams& r, bool include_h3);

/// Shortest distance between two quasienergies modulo omega.
double quasienergy_gap(double q1, double q2, double omega);

/// (3 - 3A^2/32 omega^2) omega
double resonance_point_closed_form(const DriveParams& p);

/// Solves rabi_tilde(delta) = 2 n omega inside ((2n+1) omega -+ omega / 2), re-solving xi at
/// every trial. Throws NotFoundError without a sign change in the bracket.
double resonance_point_solve(const DriveParams& p, int n);

/// 3 pi [128 (omega/A)^3 - (63/8)(omega/A)]. Throws DomainError for A = 0.
double slope_closed_form(const DriveParams& p);

/// Xi / omega = (A^3 / 128 omega^3)(1 + 17 A^2 / 2048 omega^2)
double gap_closed_form(const DriveParams& p);

/// Small-drive estimate k0 ~ delta_res A^3 (11 delta_res - omega) / (192 omega (omega + delta_res)^3).
double k0_small_drive(const DriveParams& p, double delta_res);

/// x = 3 A^2 / 32 omega^2
double resonance_shift_x(const DriveParams& p);

enum class ResonanceEngine { closed_form, exact_numeric };

struct ResonanceReport {
  int harmonic_order = 1;
  double delta_res = 0.0;  // units of omega
  double gap = 0.0;        // Xi / omega
  double slope = 0.0;      // |d gamma / d(delta/omega)|
  double x = 0.0;
  ResonanceEngine engine = ResonanceEngine::closed_form;
};

/// Closed-form 3rd-harmonic report: Delta_res, Xi, slope and x at amplitude p.amplitude.
ResonanceReport closed_form_report(const DriveParams& p);

}  // namespace rabiphase
