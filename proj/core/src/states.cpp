#include "spinflip/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinflip {

double SpinState::norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }

SpinState SpinState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero spinor");
  return {up / n, down / n};
}

cplx inner(const SpinState& a, const SpinState& b) {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

SpinState operator*(const ComplexMatrix2& m, const SpinState& s) {
  return {m.a[0] * s.up + m.a[1] * s.down, m.a[2] * s.up + m.a[3] * s.down};
}

SpinState operator+(const SpinState& a, const SpinState& b) {
  return {a.up + b.up, a.down + b.down};
}

SpinState operator*(cplx s, const SpinState& a) { return {s * a.up, s * a.down}; }

SpinState operator*(double s, const SpinState& a) { return {s * a.up, s * a.down}; }

double distance(const SpinState& a, const SpinState& b) {
  return std::sqrt(std::norm(a.up - b.up) + std::norm(a.down - b.down));
}

double BlochVector::norm() const { return std::sqrt(u * u + v * v + w * w); }

BlochVector operator+(const BlochVector& a, const BlochVector& b) {
  return {a.u + b.u, a.v + b.v, a.w + b.w};
}

BlochVector operator-(const BlochVector& a, const BlochVector& b) {
  return {a.u - b.u, a.v - b.v, a.w - b.w};
}

BlochVector operator*(double s, const BlochVector& a) { return {s * a.u, s * a.v, s * a.w}; }

double max_abs_diff(const BlochVector& a, const BlochVector& b) {
  return std::max({std::abs(a.u - b.u), std::abs(a.v - b.v), std::abs(a.w - b.w)});
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix2& m) {
  if (std::abs(m.trace() - 1.0) > 1e-9) {
    throw std::invalid_argument("density matrix trace differs from 1 by more than 1e-9");
  }
  if (m.hermiticity_defect() > 1e-9) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_state(const SpinState& s) {
  if (std::abs(s.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("spin state is not normalized");
  }
  return DensityMatrix(ComplexMatrix2::hermitian(std::norm(s.up), s.up * std::conj(s.down),
                                                 std::norm(s.down)));
}

DensityMatrix DensityMatrix::from_bloch(const BlochVector& r) {
  return DensityMatrix(
      ComplexMatrix2::hermitian(0.5 * (1.0 + r.w), 0.5 * cplx(r.u, r.v), 0.5 * (1.0 - r.w)));
}

DensityMatrix DensityMatrix::maximally_mixed() { return from_bloch({}); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(m_).first; }

double DensityMatrix::trace_error() const { return std::abs(m_.trace() - 1.0); }

BlochVector to_bloch(const ComplexMatrix2& m) {
  const cplx u = m(0, 1) + m(1, 0);
  const cplx v = cplx(0.0, -1.0) * (m(0, 1) - m(1, 0));
  const cplx w = m(0, 0) - m(1, 1);
  return {u.real(), v.real(), w.real()};
}

BlochVector to_bloch(const DensityMatrix& rho) { return to_bloch(rho.matrix()); }

BlochVector to_bloch(const SpinState& s) { return to_bloch(DensityMatrix::from_state(s)); }

}  // namespace spinflip
