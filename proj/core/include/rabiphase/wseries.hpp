#pragma once

// Interaction-picture series W(t) for U~ = U0 W, truncated to chosen first- and
// second-order harmonic terms and integrated on a uniform grid.

#include <map>
#include <utility>
#include <vector>

#include "rabiphase/linalg2.hpp"
#include "rabiphase/model.hpp"

namespace rabiphase {

struct WSeriesTerms {
  std::vector<int> first_order;                      // W_n
  std::vector<std::pair<int, int>> second_order;     // W_nm, n acting after m

  /// I + W22 + W3 + W4 + W23 + W32, the set used for the 5th-harmonic regime.
  static WSeriesTerms fifth_harmonic() { return {{3, 4}, {{2, 2}, {2, 3}, {3, 2}}}; }
};

struct WSeriesOptions {
  int grid_intervals = 50000;  // even, >= 20000
  WSeriesTerms terms = WSeriesTerms::fifth_harmonic();
  int store_stride = 0;        // keep W(t) every this many nodes; 0 keeps nothing
};

struct WSeriesResult {
  Mat2 w_at_T;
  Mat2 u_tilde_raw;  // U0(T) W(T)
  Mat2 u_tilde;      // polar projection
  double projection_distance = 0.0;
  std::map<int, Mat2> first_terms;
  std::map<std::pair<int, int>, Mat2> second_terms;
  std::vector<Mat2> w_samples;  // W at t = i * sample_spacing
  double sample_spacing = 0.0;
};

/// W_n = -i int U0^-1 H_n U0 and W_nm = (-i)^2 int dt1 HV_n(t1) int_0^t1 dt2 HV_m(t2),
/// cumulative trapezoid for the inner integral and trapezoid for the outer.
WSeriesResult w_series(const DriveParams& p, const RenormParams& r, const WSeriesOptions& opt = {});

/// Shorthand returning the projected U~(T).
Mat2 w_series_at_T(const DriveParams& p, const RenormParams& r, int grid_points = 50000);

}  // namespace rabiphase
