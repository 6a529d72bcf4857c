#include "spinflip/matrix2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinflip {

double ComplexMatrix2::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix2::hermiticity_defect() const {
  const ComplexMatrix2 d = *this - adjoint();
  double m = 0.0;
  for (const auto& z : d.a) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix2& ComplexMatrix2::operator+=(const ComplexMatrix2& o) {
  for (std::size_t i = 0; i < 4; ++i) a[i] += o.a[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator-=(const ComplexMatrix2& o) {
  for (std::size_t i = 0; i < 4; ++i) a[i] -= o.a[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator*=(cplx s) {
  for (auto& z : a) z *= s;
  return *this;
}

ComplexMatrix2 operator+(ComplexMatrix2 l, const ComplexMatrix2& r) { return l += r; }
ComplexMatrix2 operator-(ComplexMatrix2 l, const ComplexMatrix2& r) { return l -= r; }

ComplexMatrix2 operator*(const ComplexMatrix2& l, const ComplexMatrix2& r) {
  return {l.a[0] * r.a[0] + l.a[1] * r.a[2], l.a[0] * r.a[1] + l.a[1] * r.a[3],
          l.a[2] * r.a[0] + l.a[3] * r.a[2], l.a[2] * r.a[1] + l.a[3] * r.a[3]};
}

ComplexMatrix2 operator*(ComplexMatrix2 m, cplx s) { return m *= s; }
ComplexMatrix2 operator*(cplx s, ComplexMatrix2 m) { return m *= s; }
ComplexMatrix2 operator*(ComplexMatrix2 m, double s) { return m *= cplx(s, 0.0); }
ComplexMatrix2 operator*(double s, ComplexMatrix2 m) { return m *= cplx(s, 0.0); }

ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return a * b - b * a;
}

ComplexMatrix2 inverse(const ComplexMatrix2& m) {
  const cplx det = m.determinant();
  if (det == cplx(0.0, 0.0)) throw std::domain_error("singular 2x2 matrix");
  const cplx inv = 1.0 / det;
  return {m.a[3] * inv, -m.a[1] * inv, -m.a[2] * inv, m.a[0] * inv};
}

double condition_number(const ComplexMatrix2& m) {
  // s1^2 + s2^2 = |M|_F^2 and s1 * s2 = |det M|
  const double f2 = m.frobenius_norm() * m.frobenius_norm();
  const double det = std::abs(m.determinant());
  const double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det));
  const double s1sq = 0.5 * (f2 + disc);
  if (s1sq == 0.0) return std::numeric_limits<double>::infinity();
  const double s2sq = det * det / s1sq;
  if (s2sq == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(s1sq / s2sq);
}

namespace {

struct PauliDecomposition {
  double a0, ax, ay, az;
};

PauliDecomposition decompose_hermitian(const ComplexMatrix2& m) {
  return {0.5 * (m.a[0].real() + m.a[3].real()), 0.5 * (m.a[1].real() + m.a[2].real()),
          0.5 * (m.a[2].imag() - m.a[1].imag()), 0.5 * (m.a[0].real() - m.a[3].real())};
}

}  // namespace

std::pair<double, double> hermitian_eigenvalues(const ComplexMatrix2& m) {
  const auto p = decompose_hermitian(m);
  const double r = std::sqrt(p.ax * p.ax + p.ay * p.ay + p.az * p.az);
  return {p.a0 - r, p.a0 + r};
}

ComplexMatrix2 unitary_exp(const ComplexMatrix2& m) {
  const auto p = decompose_hermitian(m);
  const double r = std::sqrt(p.ax * p.ax + p.ay * p.ay + p.az * p.az);
  const double c = std::cos(r);
  // sin(r)/r, series near zero
  const double sinc = r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
  const cplx mi(0.0, -sinc);
  ComplexMatrix2 u{c + mi * p.az, mi * cplx(p.ax, -p.ay), mi * cplx(p.ax, p.ay), c - mi * p.az};
  return u * std::polar(1.0, -p.a0);
}

}  // namespace spinflip
