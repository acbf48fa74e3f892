#include "rabiphase/bessel.hpp"

#include <cmath>
#include <string>

#include "rabiphase/errors.hpp"

namespace rabiphase {

namespace {

double series(int n, double z) {
  const double half = 0.5 * z;
  const double q = -half * half;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  for (int k = 1; k < 25; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

double miller(int n, double z) {
  const double top = std::max(static_cast<double>(n), z);
  int m = static_cast<int>(top + 30.0 + 10.0 * std::sqrt(top));
  if (m % 2 != 0) ++m;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k
  double result = 0.0;
  double norm = 0.0;
  for (int k = m; k >= 1; --k) {
    const double prev = (2.0 * k / z) * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
    if (k - 1 == n) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;  // J_0 term of 1 = J0 + 2 sum J_2k
  return result / norm;
}

}  // namespace

double bessel_j(int n, double z) {
  if (n < 0 || n > kBesselMaxOrder) {
    throw DomainError("bessel_j: order " + std::to_string(n) + " outside [0, 16]");
  }
  if (!(std::abs(z) <= kBesselMaxArg)) throw DomainError("bessel_j: |z| must be <= 20");
  const double sign = (z < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
  const double az = std::abs(z);
  if (az == 0.0) return n == 0 ? 1.0 : 0.0;
  return sign * (az <= 2.0 ? series(n, az) : miller(n, az));
}

double bessel_j_small_z(int n, double z) {
  if (!(std::abs(z) <= 1.0)) throw DomainError("bessel_j_small_z: requires |z| <= 1");
  const double h = 0.5 * z;
  switch (n) {
    case 0: return 1.0 - h * h;
    case 1: return h;
    case 2: return 0.5 * h * h;
    case 3: return h * h * h / 6.0;
    default: throw DomainError("bessel_j_small_z: order must be 0..3");
  }
}

}  // namespace rabiphase
