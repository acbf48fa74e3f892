#include "rabiphase/engines.hpp"

#include <boost/math/tools/minima.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rabiphase/chrw.hpp"
#include "rabiphase/errors.hpp"
#include "rabiphase/propagator.hpp"
#include "rabiphase/wseries.hpp"

namespace rabiphase {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PhaseResult closed_form_branch(Engine e, Branch b, const Spinor2& state, double theta, double alpha, double gamma,
                               double q, double unitarity) {
  PhaseResult r;
  r.engine = e;
  r.branch = b;
  r.cyclic_state = state;
  r.theta = theta;
  r.alpha = alpha;
  r.gamma_unfolded = gamma;
  r.gamma = fold_2pi(gamma);
  r.q = q;
  r.quality.unitarity_error = unitarity;
  return r;
}

void fill_closed_form(EngineResult& out, const std::pair<Spinor2, Spinor2>& states, const ChrwPhases& ph,
                      double unitarity) {
  out.plus = closed_form_branch(out.engine, Branch::plus, states.first, ph.theta_plus, ph.alpha_plus, ph.gamma_plus,
                                ph.q_plus, unitarity);
  out.minus = closed_form_branch(out.engine, Branch::minus, states.second, ph.theta_minus, ph.alpha_minus,
                                 ph.gamma_minus, ph.q_minus, unitarity);
}

HamiltonianFn lab(const DriveParams& p) {
  return [p](double t) { return hamiltonian_lab(p, t); };
}

}  // namespace

void swap_branches(EngineResult& r) {
  std::swap(r.plus, r.minus);
  r.plus.branch = Branch::plus;
  r.minus.branch = Branch::minus;
}

EngineResult run_engine(Engine e, const DriveParams& p, const EngineOptions& opt) {
  p.validate();
  EngineResult out;
  out.engine = e;
  out.params = p;
  out.renorm = solve_xi(p);
  out.k = kNaN;
  out.dt_omega = kNaN;
  const RenormParams& r = out.renorm;
  const auto chrw_states = chrw_cyclic_states(r);
  const ChrwPhases chrw = chrw_phases(p, r);

  ExtractOptions xo;
  xo.engine = e;
  xo.reference = chrw_states;
  xo.theta_seed = std::pair{chrw.theta_plus, chrw.theta_minus};

  switch (e) {
    case Engine::rwa:
      fill_closed_form(out, rwa_cyclic_states(p), rwa_phases(p), 0.0);
      break;
    case Engine::chrw:
      fill_closed_form(out, chrw_states, chrw, unitarity_error(u0_analytic(r, p, p.period())));
      break;
    case Engine::pt3: {
      const PerturbedPropagator u = perturbed_u_at_T(p, r, opt.include_h3);
      out.k = u.k.k;
      fill_closed_form(out, perturbed_cyclic_states(p, r, opt.include_h3), perturbed_phases(p, r, opt.include_h3),
                       u.projection_distance);
      // Total phase from the perturbed quasienergy; the dynamic part absorbs the difference so gamma is kept.
      for (PhaseResult* b : {&out.plus, &out.minus}) {
        b->theta = unwrap_near(-b->q * p.period(), b->theta);
        b->alpha = b->theta - b->gamma_unfolded;
      }
      if (branch_label({out.plus.cyclic_state, out.minus.cyclic_state}, chrw_states).swapped) swap_branches(out);
      break;
    }
    case Engine::exact: {
      const HamiltonianFn h = lab(p);
      const PropagationGrid grid = propagate(h, p, {opt.dt_omega, 1, opt.quad_points});
      if (static_cast<int>(grid.samples.size()) != opt.quad_points + 1) {
        throw DomainError("exact engine: dt_omega too coarse for quad_points samples");
      }
      const GridEvolver evolver(grid, h);
      const auto [plus, minus] =
          extract(grid.final_u(), [&evolver](double t, const Spinor2& s) { return evolver(t, s); }, h, p,
                  opt.quad_points, xo);
      out.plus = plus;
      out.minus = minus;
      out.dt_omega = grid.dt_omega;
      out.unitarity_error = grid.final_det_error;
      break;
    }
    case Engine::pt5: {
      if (opt.quad_points <= 0 || opt.w_grid_intervals % opt.quad_points != 0) {
        throw DomainError("pt5 engine: w_grid_intervals must be a multiple of quad_points");
      }
      WSeriesOptions wo;
      wo.grid_intervals = opt.w_grid_intervals;
      wo.store_stride = opt.w_grid_intervals / opt.quad_points;
      const WSeriesResult w = w_series(p, r, wo);
      const auto evolve = [&](double t, const Spinor2& s) {
        const auto i = static_cast<std::size_t>(std::llround(t / w.sample_spacing));
        const Mat2& wt = w.w_samples.at(std::min(i, w.w_samples.size() - 1));
        return (exp_minus_s(p, r, t) * (u0_analytic(r, p, t) * (wt * s))).normalized();
      };
      const auto [plus, minus] = extract(w.u_tilde, evolve, lab(p), p, opt.quad_points, xo);
      out.plus = plus;
      out.minus = minus;
      out.unitarity_error = w.projection_distance;
      break;
    }
  }
  if (e != Engine::exact && e != Engine::pt5) out.unitarity_error = out.plus.quality.unitarity_error;
  out.gap = quasienergy_gap(out.plus.q, out.minus.q, p.omega);
  return out;
}

void relabel_sweep(std::vector<EngineResult>& sweep) {
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const EngineResult& prev = sweep[i - 1];
    EngineResult& cur = sweep[i];
    const BranchLabel label = branch_label({cur.plus.cyclic_state, cur.minus.cyclic_state},
                                           {prev.plus.cyclic_state, prev.minus.cyclic_state});
    if (label.swapped) swap_branches(cur);
    cur.plus.quality.ambiguous_label = cur.minus.quality.ambiguous_label = label.ambiguous;
    if (cur.engine == Engine::exact || cur.engine == Engine::pt5) {
      for (auto [c, pv] : {std::pair{&cur.plus, &prev.plus}, std::pair{&cur.minus, &prev.minus}}) {
        const double theta = unwrap_near(c->theta, pv->theta);
        c->gamma_unfolded += theta - c->theta;
        c->theta = theta;
      }
    }
  }
}

double exact_quasienergy_gap(const DriveParams& p, double dt_omega) {
  const PropagationGrid grid = propagate(lab(p), p, {dt_omega, 1, 1});
  const auto eig = eigensystem_unitary2(grid.final_u());
  const double d = std::abs(wrap_pi(std::arg(eig[0].value) - std::arg(eig[1].value)));
  return std::min(d, kTwoPi - d) / p.period();
}

double resonance_slope(Engine e, double a_over_omega, double center, double h, const EngineOptions& opt) {
  std::vector<EngineResult> pts;
  for (double d : {center - h, center, center + h}) pts.push_back(run_engine(e, {d, a_over_omega, 1.0}, opt));
  relabel_sweep(pts);
  return std::abs(wrap_pi(pts[2].plus.gamma_unfolded - pts[0].plus.gamma_unfolded)) / (2.0 * h);
}

ResonanceReport exact_resonance_report(double a_over_omega, int n, const EngineOptions& opt, double h) {
  const DriveParams base = DriveParams::in_omega_units(2.0 * n + 1.0, a_over_omega);
  const double center = resonance_point_solve(base, n);
  const double width = 0.05;
  const auto gap_at = [&](double delta) { return exact_quasienergy_gap({delta, a_over_omega, 1.0}, opt.dt_omega); };
  std::uintmax_t iterations = 200;
  const auto [dres, gap] = boost::math::tools::brent_find_minima(gap_at, center - width, center + width, 40, iterations);
  if (std::abs(dres - center) > 0.99 * width) {
    throw NotFoundError("exact_resonance_report: gap minimum sits on the search boundary");
  }

  ResonanceReport rep;
  rep.harmonic_order = n;
  rep.delta_res = dres;
  rep.gap = gap;
  if (h <= 0.0) h = std::min(1e-4, 0.1 * gap);
  rep.slope = resonance_slope(Engine::exact, a_over_omega, dres, h, opt);
  rep.x = resonance_shift_x(base);
  rep.engine = ResonanceEngine::exact_numeric;
  return rep;
}

}  // namespace rabiphase
