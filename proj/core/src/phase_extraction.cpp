#include "rabiphase/phase_extraction.hpp"

#include <array>
#include <cmath>
#include <string>

#include "rabiphase/chrw.hpp"
#include "rabiphase/errors.hpp"
#include "rabiphase/quadrature.hpp"

namespace rabiphase {

namespace {

constexpr std::array<std::pair<Engine, std::string_view>, 5> kEngineNames{{
    {Engine::exact, "exact"},
    {Engine::rwa, "rwa"},
    {Engine::chrw, "chrw"},
    {Engine::pt3, "pt3"},
    {Engine::pt5, "pt5"},
}};

}  // namespace

std::string_view engine_name(Engine e) {
  for (const auto& [k, v] : kEngineNames) {
    if (k == e) return v;
  }
  return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) {
  for (const auto& [k, v] : kEngineNames) {
    if (v == name) return k;
  }
  return std::nullopt;
}

BranchLabel branch_label(const std::pair<Spinor2, Spinor2>& states, const std::pair<Spinor2, Spinor2>& reference) {
  const double o0 = std::norm(inner(reference.first, states.first));
  const double o1 = std::norm(inner(reference.first, states.second));
  BranchLabel out;
  out.swapped = o1 > o0;
  out.ambiguous = std::abs(o0 - 0.5) < 1e-9 && std::abs(o1 - 0.5) < 1e-9;
  return out;
}

double unwrap_near(double theta, double seed) { return theta + kTwoPi * std::round((seed - theta) / kTwoPi); }

std::pair<PhaseResult, PhaseResult> extract(const Mat2& u_period, const StateEvolver& evolve, const HamiltonianFn& h,
                                            const DriveParams& p, int quad_points, const ExtractOptions& opt) {
  if (quad_points < 1000 || quad_points % 2 != 0) throw DomainError("extract: quad_points must be even and >= 1000");
  const double u_err = unitarity_error(u_period);
  if (u_err > 1e-8) throw DomainError("extract: period propagator is not unitary within 1e-8");

  const auto eig = eigensystem_unitary2(u_period, opt.degeneracy_tol);
  std::pair<Spinor2, Spinor2> states{eig[0].vector, eig[1].vector};
  std::pair<Complex, Complex> values{eig[0].value, eig[1].value};
  BranchLabel label;
  if (opt.reference) label = branch_label(states, *opt.reference);
  if (label.swapped) {
    std::swap(states.first, states.second);
    std::swap(values.first, values.second);
  }

  const double T = p.period();
  const double step = T / quad_points;
  const auto make = [&](const Spinor2& psi0, Complex value, Branch branch, std::optional<double> seed) {
    PhaseResult r;
    r.engine = opt.engine;
    r.branch = branch;
    r.cyclic_state = psi0;
    const double raw = std::arg(value);
    r.theta = seed ? unwrap_near(raw, *seed) : raw;
    r.q = fold_quasienergy(-r.theta / T, p.omega);

    std::vector<double> energy(static_cast<std::size_t>(quad_points) + 1);
    for (int i = 0; i <= quad_points; ++i) {
      const double t = i == quad_points ? T : i * step;
      const Spinor2 psi = evolve(t, psi0);
      energy[static_cast<std::size_t>(i)] = expectation(psi, h(t), psi).real() / psi.norm_sq();
    }
    const double integral = simpson(energy, step);
    double coarse;
    if (quad_points % 4 == 0) {
      std::vector<double> half;
      half.reserve(energy.size() / 2 + 1);
      for (std::size_t i = 0; i < energy.size(); i += 2) half.push_back(energy[i]);
      coarse = simpson(half, 2.0 * step);
      r.quality.quadrature_error_estimate = std::abs(integral - coarse) / 15.0;
    } else {
      double trap = 0.5 * (energy.front() + energy.back());
      for (std::size_t i = 1; i + 1 < energy.size(); ++i) trap += energy[i];
      r.quality.quadrature_error_estimate = std::abs(integral - trap * step);
    }
    r.alpha = -integral;
    r.gamma_unfolded = r.theta - r.alpha;
    r.gamma = fold_2pi(r.gamma_unfolded);
    r.quality.unitarity_error = u_err;
    r.quality.low_accuracy = r.quality.quadrature_error_estimate > 1e-4;
    r.quality.ambiguous_label = label.ambiguous;
    return r;
  };

  std::optional<double> seed_plus;
  std::optional<double> seed_minus;
  if (opt.theta_seed) {
    seed_plus = opt.theta_seed->first;
    seed_minus = opt.theta_seed->second;
  }
  return {make(states.first, values.first, Branch::plus, seed_plus),
          make(states.second, values.second, Branch::minus, seed_minus)};
}

std::vector<double> cyclicity_check(const StateEvolver& evolve, const Spinor2& psi0, int n_periods,
                                    const DriveParams& p) {
  if (n_periods < 1) throw DomainError("cyclicity_check: n_periods must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_periods));
  for (int m = 1; m <= n_periods; ++m) {
    const Spinor2 psi = evolve(m * p.period(), psi0);
    out.push_back(std::abs(inner(psi0, psi)) / (psi0.norm() * psi.norm()));
  }
  return out;
}

}  // namespace rabiphase
