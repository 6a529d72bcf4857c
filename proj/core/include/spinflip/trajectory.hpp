#pragma once

#include <array>

#include "spinflip/material.hpp"

namespace spinflip {

/// c0 + c1 t + c2 t^2 + c3 t^3 on [0, tf], t in ns.
class CubicPolynomial {
 public:
  CubicPolynomial(std::array<double, 4> coefficients, double tf);

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  const std::array<double, 4>& coefficients() const { return c_; }
  double tf() const { return tf_; }

 private:
  void check_domain(double t) const;

  std::array<double, 4> c_;
  double tf_;
};

/// Cubic with theta(0)=0, theta(tf)=pi and zero slope at both ends.
CubicPolynomial solve_theta(double tf);

/// Cubic with phi(0)=pi/2, phi(tf)=pi/2, phi(tf/2)=0 and phi'(tf/2)=mid_slope.
CubicPolynomial solve_phi_boundary(double tf, double mid_slope);

/// phi cubic whose midpoint slope cancels the field singularity at tf/2:
/// phi'(tf/2) = (beta/alpha) theta'(tf/2) - eta*b0.
CubicPolynomial solve_phi(const CubicPolynomial& theta, double b0, const MaterialParams& mat);
CubicPolynomial solve_phi(double tf, double b0, const MaterialParams& mat);

/// Angles and their time derivatives at one instant.
struct AngleSample {
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
  double theta_ddot = 0.0;
  double phi_ddot = 0.0;
};

/// The inverse-engineered control plan: theta(t), phi(t) on [0, tf] for a
/// static field b0 (T).
class TrajectoryDesign {
 public:
  TrajectoryDesign(CubicPolynomial theta, CubicPolynomial phi, double b0, MaterialParams mat);

  /// Solves both boundary-value problems.
  static TrajectoryDesign make(double tf, double b0, const MaterialParams& mat);

  const CubicPolynomial& theta() const { return theta_; }
  const CubicPolynomial& phi() const { return phi_; }
  double tf() const { return theta_.tf(); }
  double b0() const { return b0_; }
  const MaterialParams& material() const { return mat_; }

 private:
  CubicPolynomial theta_;
  CubicPolynomial phi_;
  double b0_;
  MaterialParams mat_;
};

/// Throws std::invalid_argument for t outside [0, tf].
AngleSample eval_angles(const TrajectoryDesign& design, double t);

}  // namespace spinflip
