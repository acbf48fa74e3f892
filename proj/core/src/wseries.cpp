#include "rabiphase/wseries.hpp"

#include <algorithm>
#include <set>

#include "rabiphase/chrw.hpp"
#include "rabiphase/errors.hpp"

namespace rabiphase {

WSeriesResult w_series(const DriveParams& p, const RenormParams& r, const WSeriesOptions& opt) {
  const int n_int = opt.grid_intervals;
  if (n_int < 20000 || n_int % 2 != 0) throw DomainError("w_series: grid_intervals must be even and >= 20000");
  if (opt.store_stride < 0 || (opt.store_stride > 0 && n_int % opt.store_stride != 0)) {
    throw DomainError("w_series: store_stride must divide grid_intervals");
  }

  std::set<int> orders(opt.terms.first_order.begin(), opt.terms.first_order.end());
  for (const auto& [n, m] : opt.terms.second_order) {
    orders.insert(n);
    orders.insert(m);
  }
  for (int n : orders) {
    if (n < 2) throw DomainError("w_series: harmonic orders must be >= 2");
  }
  const std::vector<int> order_list(orders.begin(), orders.end());
  const auto slot = [&](int n) {
    return static_cast<std::size_t>(std::lower_bound(order_list.begin(), order_list.end(), n) - order_list.begin());
  };

  const double T = p.period();
  const double h = T / n_int;
  const std::size_t n_orders = order_list.size();
  const std::size_t n_pairs = opt.terms.second_order.size();
  std::vector<Mat2> hv(n_orders), hv_prev(n_orders), cum(n_orders, Mat2::zero());
  std::vector<Mat2> second(n_pairs, Mat2::zero()), second_prev(n_pairs, Mat2::zero());
  const Complex mi(0.0, -1.0);

  WSeriesResult out;
  if (opt.store_stride > 0) {
    out.sample_spacing = h * opt.store_stride;
    out.w_samples.reserve(static_cast<std::size_t>(n_int / opt.store_stride + 1));
  }
  const auto assemble = [&]() {
    Mat2 w = Mat2::identity();
    for (int n : opt.terms.first_order) w += mi * cum[slot(n)];
    for (const Mat2& s : second) w += -1.0 * s;
    return w;
  };

  for (int i = 0; i <= n_int; ++i) {
    const double t = i * h;
    const Mat2 u0 = u0_analytic(r, p, t);
    const Mat2 u0_inv = dagger(u0);
    for (std::size_t j = 0; j < n_orders; ++j) hv[j] = u0_inv * harmonic_term(p, r, order_list[j], t) * u0;
    if (i > 0) {
      for (std::size_t j = 0; j < n_orders; ++j) cum[j] += (0.5 * h) * (hv_prev[j] + hv[j]);
    }
    for (std::size_t q = 0; q < n_pairs; ++q) {
      const auto [n, m] = opt.terms.second_order[q];
      const Mat2 integrand = hv[slot(n)] * cum[slot(m)];
      if (i > 0) second[q] += (0.5 * h) * (second_prev[q] + integrand);
      second_prev[q] = integrand;
    }
    hv_prev = hv;
    if (opt.store_stride > 0 && i % opt.store_stride == 0) out.w_samples.push_back(assemble());
  }

  out.w_at_T = assemble();
  for (int n : opt.terms.first_order) out.first_terms[n] = mi * cum[slot(n)];
  for (std::size_t q = 0; q < n_pairs; ++q) out.second_terms[opt.terms.second_order[q]] = -1.0 * second[q];
  out.u_tilde_raw = u0_analytic(r, p, T) * out.w_at_T;
  const PolarResult pr = polar_project(out.u_tilde_raw);
  out.u_tilde = pr.unitary;
  out.projection_distance = pr.distance;
  return out;
}

Mat2 w_series_at_T(const DriveParams& p, const RenormParams& r, int grid_points) {
  WSeriesOptions opt;
  opt.grid_intervals = grid_points;
  return w_series(p, r, opt).u_tilde;
}

}  // namespace rabiphase
