#pragma once

#include <array>
#include <complex>
#include <utility>

namespace spinflip {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major.
struct ComplexMatrix2 {
  std::array<cplx, 4> a{};

  constexpr ComplexMatrix2() = default;
  constexpr ComplexMatrix2(cplx m00, cplx m01, cplx m10, cplx m11) : a{m00, m01, m10, m11} {}

  /// Hermitian matrix [[d0, off], [conj(off), d1]]; conjugate symmetry is exact.
  static ComplexMatrix2 hermitian(double d0, cplx off, double d1) {
    return {cplx(d0, 0.0), off, std::conj(off), cplx(d1, 0.0)};
  }
  static constexpr ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr ComplexMatrix2 zero() { return {}; }

  cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }
  const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(2 * r + c)]; }

  ComplexMatrix2 adjoint() const {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
  }
  cplx trace() const { return a[0] + a[3]; }
  cplx determinant() const { return a[0] * a[3] - a[1] * a[2]; }
  double frobenius_norm() const;
  /// max |M - M^dagger| entry
  double hermiticity_defect() const;

  ComplexMatrix2& operator+=(const ComplexMatrix2& o);
  ComplexMatrix2& operator-=(const ComplexMatrix2& o);
  ComplexMatrix2& operator*=(cplx s);
};

ComplexMatrix2 operator+(ComplexMatrix2 l, const ComplexMatrix2& r);
ComplexMatrix2 operator-(ComplexMatrix2 l, const ComplexMatrix2& r);
ComplexMatrix2 operator*(const ComplexMatrix2& l, const ComplexMatrix2& r);
ComplexMatrix2 operator*(ComplexMatrix2 m, cplx s);
ComplexMatrix2 operator*(cplx s, ComplexMatrix2 m);
ComplexMatrix2 operator*(ComplexMatrix2 m, double s);
ComplexMatrix2 operator*(double s, ComplexMatrix2 m);

/// ab - ba
ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b);

/// Inverse; throws std::domain_error for a singular matrix.
ComplexMatrix2 inverse(const ComplexMatrix2& m);

/// 2-norm condition number.
double condition_number(const ComplexMatrix2& m);

/// Eigenvalues of a Hermitian matrix, ascending.
std::pair<double, double> hermitian_eigenvalues(const ComplexMatrix2& m);

/// exp(-i * m) for Hermitian m (closed form via the Pauli decomposition).
ComplexMatrix2 unitary_exp(const ComplexMatrix2& m);

namespace pauli {
inline ComplexMatrix2 x() { return {0.0, 1.0, 1.0, 0.0}; }
inline ComplexMatrix2 y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
inline ComplexMatrix2 z() { return {1.0, 0.0, 0.0, -1.0}; }
}  // namespace pauli

}  // namespace spinflip
