#pragma once

// Cyclic states, quasienergies and the theta = alpha + gamma split from any
// one-period propagator together with a way to evolve states inside the period.

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rabiphase/linalg2.hpp"
#include "rabiphase/model.hpp"

namespace rabiphase {

enum class Engine { exact, rwa, chrw, pt3, pt5 };

std::string_view engine_name(Engine e);
std::optional<Engine> parse_engine(std::string_view name);

struct PhaseQuality {
  double unitarity_error = 0.0;
  double quadrature_error_estimate = 0.0;
  bool low_accuracy = false;     // quadrature estimate above 1e-4 rad
  bool ambiguous_label = false;  // both reference overlaps at 1/2
};

struct PhaseResult {
  Engine engine = Engine::exact;
  Branch branch = Branch::plus;
  Spinor2 cyclic_state;
  double q = 0.0;      // principal zone (-omega/2, omega/2]
  double theta = 0.0;  // unwrapped total phase
  double alpha = 0.0;  // dynamic phase
  double gamma = 0.0;  // folded to [0, 2 pi)
  double gamma_unfolded = 0.0;
  PhaseQuality quality;
};

/// psi(t) given psi(0); t ranges over [0, T].
using StateEvolver = std::function<Spinor2(double t, const Spinor2& psi0)>;

struct BranchLabel {
  bool swapped = false;  // true when states.second is the + branch
  bool ambiguous = false;
};

/// + goes to the state with the larger |<ref+|state>|^2; ties keep the given order.
BranchLabel branch_label(const std::pair<Spinor2, Spinor2>& states, const std::pair<Spinor2, Spinor2>& reference);

struct ExtractOptions {
  Engine engine = Engine::exact;
  std::optional<std::pair<Spinor2, Spinor2>> reference;  // (+, -) states fixing the labels
  std::optional<std::pair<double, double>> theta_seed;   // (+, -) unwrapped totals to pick the winding
  double degeneracy_tol = -1.0;
};

/// Requires quad_points even and >= 1000, u_period unitary within 1e-8.
/// theta = arg of the eigenvalue (U(T)|psi> = e^{i theta}|psi>) on the winding nearest the seed,
/// alpha = -int_0^T <psi|H|psi> dt by composite Simpson, q = -theta / T folded.
std::pair<PhaseResult, PhaseResult> extract(const Mat2& u_period, const StateEvolver& evolve, const HamiltonianFn& h,
                                            const DriveParams& p, int quad_points, const ExtractOptions& opt = {});

/// theta + 2 pi m closest to seed.
double unwrap_near(double theta, double seed);

/// |<psi0|psi(mT)>| for m = 1..n_periods.
std::vector<double> cyclicity_check(const StateEvolver& evolve, const Spinor2& psi0, int n_periods,
                                    const DriveParams& p);

}  // namespace rabiphase
