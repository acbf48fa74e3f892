#pragma once

namespace rabiphase {

inline constexpr int kBesselMaxOrder = 16;
inline constexpr double kBesselMaxArg = 20.0;

/// J_n(z) for 0 <= n <= 16, |z| <= 20, absolute error below 1e-12.
/// Ascending series for |z| <= 2, normalized Miller recurrence above.
double bessel_j(int n, double z);

/// Truncated small-argument forms used by the resonance expansions:
/// J0 ~ 1 - (z/2)^2, J1 ~ z/2, J2 ~ (z/2)^2 / 2, J3 ~ (z/2)^3 / 6. Requires |z| <= 1.
double bessel_j_small_z(int n, double z);

}  // namespace rabiphase
