#include "rabiphase/linalg2.hpp"

#include <algorithm>

#include "rabiphase/errors.hpp"

namespace rabiphase {

PauliDecomp pauli_decompose(const Mat2& m) {
  // tr(sigma_k M)/2 written out entrywise.
  return {0.5 * (m.m[0] + m.m[3]), 0.5 * (m.m[1] + m.m[2]), 0.5 * kI * (m.m[1] - m.m[2]),
          0.5 * (m.m[0] - m.m[3])};
}

Mat2 reconstruct(const PauliDecomp& d) {
  return {d.a0 + d.az, d.ax - kI * d.ay, d.ax + kI * d.ay, d.a0 - d.az};
}

double fold_2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double wrap_pi(double x) {
  double r = fold_2pi(x);
  if (r > kPi) r -= kTwoPi;
  return r;
}

namespace {

// +1 eigenvector of n.sigma for a real unit vector n, picking the better-conditioned form.
Spinor2 axis_up_state(double nx, double ny, double nz) {
  Spinor2 v = nz >= 0.0 ? Spinor2{1.0 + nz, Complex(nx, ny)} : Spinor2{Complex(nx, -ny), 1.0 - nz};
  return v.normalized();
}

}  // namespace

std::array<EigenPair, 2> eigensystem_unitary2(const Mat2& u, double degeneracy_tol) {
  if (degeneracy_tol < 0.0) degeneracy_tol = 1e-12 * frobenius(u);

  const double phi = 0.5 * std::arg(det(u));
  const Mat2 v = std::exp(Complex(0.0, -phi)) * u;
  const PauliDecomp d = pauli_decompose(v);
  // v = cos(chi) I + i sin(chi) n.sigma
  const double cos_chi = d.a0.real();
  const double sx = d.ax.imag();
  const double sy = d.ay.imag();
  const double sz = d.az.imag();
  const double s = std::sqrt(sx * sx + sy * sy + sz * sz);
  if (s < degeneracy_tol) {
    throw DegenerateError("eigensystem_unitary2: propagator is proportional to the identity");
  }
  const double chi = std::atan2(s, cos_chi);
  const Spinor2 up = axis_up_state(sx / s, sy / s, sz / s);

  std::array<EigenPair, 2> out{EigenPair{std::exp(Complex(0.0, phi + chi)), up},
                               EigenPair{std::exp(Complex(0.0, phi - chi)), orthogonal_complement(up)}};
  const auto principal_arg = [](Complex z) { return wrap_pi(std::arg(z)); };
  if (principal_arg(out[1].value) < principal_arg(out[0].value)) std::swap(out[0], out[1]);
  return out;
}

PolarResult polar_project(const Mat2& m) {
  const PauliDecomp h = pauli_decompose(dagger(m) * m);
  const double h0 = h.a0.real();
  const double hx = h.ax.real();
  const double hy = h.ay.real();
  const double hz = h.az.real();
  const double hn = std::sqrt(hx * hx + hy * hy + hz * hz);
  const double lp = h0 + hn;
  const double lm = h0 - hn;
  if (lm <= 0.0) throw DegenerateError("polar_project: matrix is singular");
  const double rp = std::sqrt(lp);
  const double rm = std::sqrt(lm);
  // (M^dagger M)^{-1/2} = c0 I + c1 h.sigma, with c1 written to avoid cancellation.
  const double c0 = 0.5 * (1.0 / rp + 1.0 / rm);
  const double c1 = -1.0 / (rp * rm * (rp + rm));
  const Mat2 inv_sqrt = pauli_combination(c0, c1 * hx, c1 * hy, c1 * hz);
  const Mat2 unitary = m * inv_sqrt;
  return {unitary, frobenius(m - unitary)};
}

Mat2 expm(const Mat2& m) {
  const PauliDecomp d = pauli_decompose(m);
  const Complex s2 = d.ax * d.ax + d.ay * d.ay + d.az * d.az;
  const Complex s = std::sqrt(s2);
  Complex ch;
  Complex sh_over_s;
  if (std::abs(s) < 1e-4) {
    ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
    sh_over_s = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
  } else {
    ch = std::cosh(s);
    sh_over_s = std::sinh(s) / s;
  }
  const Complex e0 = std::exp(d.a0);
  return reconstruct({e0 * ch, e0 * sh_over_s * d.ax, e0 * sh_over_s * d.ay, e0 * sh_over_s * d.az});
}

}  // namespace rabiphase
