#pragma once

// Complex 2-vectors and 2x2 matrices for two-level systems.

#include <array>
#include <cmath>
#include <complex>

namespace rabiphase {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Two-component state. Normalization is explicit: call normalized().
struct Spinor2 {
  Complex c1{};
  Complex c2{};

  double norm_sq() const { return std::norm(c1) + std::norm(c2); }
  double norm() const { return std::sqrt(norm_sq()); }
  Spinor2 normalized() const {
    const double n = norm();
    return {c1 / n, c2 / n};
  }
};

inline Spinor2 operator*(Complex s, const Spinor2& v) { return {s * v.c1, s * v.c2}; }
inline Spinor2 operator+(const Spinor2& a, const Spinor2& b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
inline Spinor2 operator-(const Spinor2& a, const Spinor2& b) { return {a.c1 - b.c1, a.c2 - b.c2}; }

/// <a|b>
inline Complex inner(const Spinor2& a, const Spinor2& b) {
  return std::conj(a.c1) * b.c1 + std::conj(a.c2) * b.c2;
}

/// The state orthogonal to v with the (-c2*, c1*) phase convention.
inline Spinor2 orthogonal_complement(const Spinor2& v) { return {-std::conj(v.c2), std::conj(v.c1)}; }

/// Row-major 2x2 complex matrix. Holds propagators and Hamiltonians alike.
struct Mat2 {
  std::array<Complex, 4> m{};

  constexpr Mat2() = default;
  constexpr Mat2(Complex a, Complex b, Complex c, Complex d) : m{a, b, c, d} {}

  Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  const Complex& operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
};

/// Propagators are stored as plain 2x2 matrices; unitarity is checked, not typed.
using Unitary2 = Mat2;

inline constexpr Mat2 kSigmaX{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 kSigmaY{0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0};
inline constexpr Mat2 kSigmaZ{1.0, 0.0, 0.0, -1.0};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m[0] + b.m[0], a.m[1] + b.m[1], a.m[2] + b.m[2], a.m[3] + b.m[3]};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]};
}
inline Mat2 operator*(Complex s, const Mat2& a) { return {s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}; }
inline Mat2 operator*(double s, const Mat2& a) { return {s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}; }
inline Mat2& operator+=(Mat2& a, const Mat2& b) { return a = a + b; }

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
          a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
}

inline Spinor2 operator*(const Mat2& a, const Spinor2& v) {
  return {a.m[0] * v.c1 + a.m[1] * v.c2, a.m[2] * v.c1 + a.m[3] * v.c2};
}

inline Mat2 dagger(const Mat2& a) {
  return {std::conj(a.m[0]), std::conj(a.m[2]), std::conj(a.m[1]), std::conj(a.m[3])};
}

inline Complex trace(const Mat2& a) { return a.m[0] + a.m[3]; }
inline Complex det(const Mat2& a) { return a.m[0] * a.m[3] - a.m[1] * a.m[2]; }

/// <a|M|b>
inline Complex expectation(const Spinor2& a, const Mat2& op, const Spinor2& b) { return inner(a, op * b); }

/// Largest entry modulus.
inline double max_abs(const Mat2& a) {
  double r = 0.0;
  for (const auto& z : a.m) r = std::max(r, std::abs(z));
  return r;
}

inline double frobenius(const Mat2& a) {
  double s = 0.0;
  for (const auto& z : a.m) s += std::norm(z);
  return std::sqrt(s);
}

/// |det(U^dagger U) - 1|, the drift metric reported by the integrator.
inline double det_unitarity_error(const Mat2& u) { return std::abs(det(dagger(u) * u) - 1.0); }

/// max entry of |U^dagger U - I|.
inline double unitarity_error(const Mat2& u) { return max_abs(dagger(u) * u - Mat2::identity()); }

inline bool is_unitary(const Mat2& u, double tol) { return unitarity_error(u) <= tol; }

inline bool is_hermitian(const Mat2& h, double tol) { return max_abs(h - dagger(h)) <= tol; }

/// Coefficients of M = a0 I + ax sx + ay sy + az sz.
struct PauliDecomp {
  Complex a0{};
  Complex ax{};
  Complex ay{};
  Complex az{};
};

PauliDecomp pauli_decompose(const Mat2& m);
Mat2 reconstruct(const PauliDecomp& d);

/// Real-axis convenience: a0 I + n.sigma with complex coefficients.
inline Mat2 pauli_combination(Complex a0, Complex ax, Complex ay, Complex az) {
  return reconstruct({a0, ax, ay, az});
}

struct EigenPair {
  Complex value;
  Spinor2 vector;
};

/// Eigenpairs of a unitary via its SU(2) rotation axis, sorted by arg(value) in (-pi, pi].
/// Throws DegenerateError when the traceless part is below degeneracy_tol (U proportional to I).
/// A negative tolerance selects the default 1e-12 * ||u||_F.
std::array<EigenPair, 2> eigensystem_unitary2(const Mat2& u, double degeneracy_tol = -1.0);

/// Closest unitary in Frobenius norm (polar factor of M = U P).
struct PolarResult {
  Mat2 unitary;
  double distance;  // ||M - U||_F
};
PolarResult polar_project(const Mat2& m);

/// Matrix exponential via Pauli decomposition.
Mat2 expm(const Mat2& m);

/// arg mapped to [0, 2pi).
double fold_2pi(double x);
/// x mapped to (-pi, pi].
double wrap_pi(double x);

}  // namespace rabiphase
