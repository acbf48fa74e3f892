#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace rabiphase {

/// Composite Simpson over uniformly spaced samples; samples.size()-1 must be even.
inline double simpson(std::span<const double> samples, double h) {
  const std::size_t n = samples.size();
  if (n < 3 || (n - 1) % 2 != 0) throw std::invalid_argument("simpson: need an even number of intervals");
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 == 1 ? odd : even) += samples[i];
  return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

/// Simpson on [a, b] with `intervals` (even) panels.
template <class F>
auto simpson(F&& f, double a, double b, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw std::invalid_argument("simpson: intervals must be even");
  const double h = (b - a) / intervals;
  auto acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    acc = acc + w * f(a + i * h);
  }
  return (h / 3.0) * acc;
}

}  // namespace rabiphase
