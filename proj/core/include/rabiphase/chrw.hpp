#pragma once

// Closed-form engine for the renormalized RWA-form Hamiltonian, plus the plain RWA.

#include <utility>

#include "rabiphase/linalg2.hpp"
#include "rabiphase/model.hpp"

namespace rabiphase {

/// Total, dynamic and geometric phases (radians, unfolded) and quasienergies
/// (frequency units, principal branch) of both Floquet branches.
struct ChrwPhases {
  double theta_plus = 0.0;
  double alpha_plus = 0.0;
  double gamma_plus = 0.0;
  double q_plus = 0.0;
  double theta_minus = 0.0;
  double alpha_minus = 0.0;
  double gamma_minus = 0.0;
  double q_minus = 0.0;

  double gamma_plus_folded() const { return fold_2pi(gamma_plus); }
  double gamma_minus_folded() const { return fold_2pi(gamma_minus); }
};

/// The symbols entering the closed forms. Kept separate from RenormParams so the
/// RWA reduction can substitute them directly.
struct ChrwSymbols {
  double a_tilde = 0.0;
  double delta_tilde = 0.0;
  double detuning_tilde = 0.0;
  double rabi_tilde = 0.0;
  double amplitude = 0.0;  // bare drive A
  double omega = 1.0;

  static ChrwSymbols from(const DriveParams& p, const RenormParams& r);
};

/// Maps q to the principal zone (-omega/2, omega/2].
double fold_quasienergy(double q, double omega);

/// Analytic propagator of hamiltonian_chrw.
Mat2 u0_analytic(const RenormParams& r, const DriveParams& p, double t);

/// Cyclic states |+>, |-> of u0_analytic(T). Near the prefactor pole the
/// ill-conditioned state is built as the orthogonal complement of the other.
std::pair<Spinor2, Spinor2> chrw_cyclic_states(const RenormParams& r);

ChrwPhases chrw_phases_from_symbols(const ChrwSymbols& s);
ChrwPhases chrw_phases(const DriveParams& p, const RenormParams& r);

/// gamma_+ = (1 - detuning / rabi) pi, the RWA closed form.
double rwa_geometric_phase_form(double detuning, double rabi);

/// Plain RWA: detuning delta - omega, Rabi frequency sqrt(detuning^2 + A^2 / 4).
ChrwPhases rwa_phases(const DriveParams& p);
double rwa_rabi_frequency(const DriveParams& p);

/// Cyclic states of the plain RWA propagator (the closed-form CHRW propagator with unrenormalized symbols).
std::pair<Spinor2, Spinor2> rwa_cyclic_states(const DriveParams& p);

}  // namespace rabiphase
