#pragma once

#include "spinflip/matrix2.hpp"

namespace spinflip {

/// Pure spin state in the sigma_z basis: (amplitude of |1>, amplitude of |-1>).
struct SpinState {
  cplx up{1.0, 0.0};
  cplx down{0.0, 0.0};

  double norm() const;
  SpinState normalized() const;

  static SpinState spin_up() { return {1.0, 0.0}; }
  static SpinState spin_down() { return {0.0, 1.0}; }
};

/// <a|b>
cplx inner(const SpinState& a, const SpinState& b);
SpinState operator*(const ComplexMatrix2& m, const SpinState& s);
SpinState operator+(const SpinState& a, const SpinState& b);
SpinState operator*(cplx s, const SpinState& a);
SpinState operator*(double s, const SpinState& a);
double distance(const SpinState& a, const SpinState& b);

/// Bloch vector with u = rho_{1,-1} + rho_{-1,1}, v = -i(rho_{1,-1} - rho_{-1,1}),
/// w = rho_{11} - rho_{-1-1}. Note v = 2 Im(rho_{1,-1}), so a state
/// (cos(t/2) e^{ip}, sin(t/2)) sits at (sin t cos p, sin t sin p, cos t).
struct BlochVector {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  double norm() const;
};

BlochVector operator+(const BlochVector& a, const BlochVector& b);
BlochVector operator-(const BlochVector& a, const BlochVector& b);
BlochVector operator*(double s, const BlochVector& a);
double max_abs_diff(const BlochVector& a, const BlochVector& b);

/// Unit-trace 2x2 density matrix.
class DensityMatrix {
 public:
  /// Throws std::invalid_argument if |Tr m - 1| > 1e-9 or m is not Hermitian
  /// within 1e-9.
  static DensityMatrix from_matrix(const ComplexMatrix2& m);
  static DensityMatrix from_state(const SpinState& s);
  static DensityMatrix from_bloch(const BlochVector& r);
  static DensityMatrix maximally_mixed();

  const ComplexMatrix2& matrix() const { return m_; }
  double purity() const;
  double min_eigenvalue() const;
  double trace_error() const;

 private:
  explicit DensityMatrix(const ComplexMatrix2& m) : m_(m) {}
  ComplexMatrix2 m_;
};

BlochVector to_bloch(const SpinState& s);
BlochVector to_bloch(const DensityMatrix& rho);
/// Same map applied to an arbitrary matrix (used on RHS derivatives).
BlochVector to_bloch(const ComplexMatrix2& m);

}  // namespace spinflip
