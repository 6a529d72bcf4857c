#include "spinflip/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinflip/constants.hpp"
#include "spinflip/linear_solve.hpp"

namespace spinflip {

CubicPolynomial::CubicPolynomial(std::array<double, 4> coefficients, double tf)
    : c_(coefficients), tf_(tf) {
  if (!(tf > 0.0) || !std::isfinite(tf)) throw std::invalid_argument("tf must be positive");
  for (double c : c_) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite polynomial coefficient");
  }
}

void CubicPolynomial::check_domain(double t) const {
  const double slack = 1e-12 * tf_;
  if (!(t >= -slack && t <= tf_ + slack)) {
    throw std::invalid_argument("time " + std::to_string(t) + " ns outside [0, " +
                                std::to_string(tf_) + "] ns");
  }
}

double CubicPolynomial::value(double t) const {
  check_domain(t);
  return ((c_[3] * t + c_[2]) * t + c_[1]) * t + c_[0];
}

double CubicPolynomial::derivative(double t) const {
  check_domain(t);
  return (3.0 * c_[3] * t + 2.0 * c_[2]) * t + c_[1];
}

double CubicPolynomial::second_derivative(double t) const {
  check_domain(t);
  return 6.0 * c_[3] * t + 2.0 * c_[2];
}

namespace {

// Rows of the boundary system in normalized time s = t/tf.
std::array<double, 4> value_row(double s) { return {1.0, s, s * s, s * s * s}; }
std::array<double, 4> slope_row(double s) { return {0.0, 1.0, 2.0 * s, 3.0 * s * s}; }

CubicPolynomial rescale(const std::array<double, 4>& normalized, double tf) {
  return CubicPolynomial({normalized[0], normalized[1] / tf, normalized[2] / (tf * tf),
                          normalized[3] / (tf * tf * tf)},
                         tf);
}

void require_positive_tf(double tf) {
  if (!(tf > 0.0) || !std::isfinite(tf)) throw std::invalid_argument("tf must be positive");
}

}  // namespace

CubicPolynomial solve_theta(double tf) {
  require_positive_tf(tf);
  const Matrix4d a{value_row(0.0), value_row(1.0), slope_row(0.0), slope_row(1.0)};
  return rescale(solve_linear4(a, {0.0, pi, 0.0, 0.0}), tf);
}

CubicPolynomial solve_phi_boundary(double tf, double mid_slope) {
  require_positive_tf(tf);
  if (!std::isfinite(mid_slope)) throw std::invalid_argument("non-finite phi slope");
  const Matrix4d a{value_row(0.0), value_row(1.0), value_row(0.5), slope_row(0.5)};
  // d(phi)/ds = tf * d(phi)/dt
  return rescale(solve_linear4(a, {0.5 * pi, 0.5 * pi, 0.0, mid_slope * tf}), tf);
}

CubicPolynomial solve_phi(const CubicPolynomial& theta, double b0, const MaterialParams& mat) {
  if (!std::isfinite(b0)) throw std::invalid_argument("b0 must be finite");
  const double tf = theta.tf();
  const double slope = mat.beta_over_alpha() * theta.derivative(0.5 * tf) - mat.eta() * b0;
  return solve_phi_boundary(tf, slope);
}

CubicPolynomial solve_phi(double tf, double b0, const MaterialParams& mat) {
  return solve_phi(solve_theta(tf), b0, mat);
}

TrajectoryDesign::TrajectoryDesign(CubicPolynomial theta, CubicPolynomial phi, double b0,
                                   MaterialParams mat)
    : theta_(theta), phi_(phi), b0_(b0), mat_(mat) {
  if (theta_.tf() != phi_.tf()) {
    throw std::invalid_argument("theta and phi must share the same tf");
  }
  if (!std::isfinite(b0)) throw std::invalid_argument("b0 must be finite");
}

TrajectoryDesign TrajectoryDesign::make(double tf, double b0, const MaterialParams& mat) {
  auto theta = solve_theta(tf);
  auto phi = solve_phi(theta, b0, mat);
  return {theta, phi, b0, mat};
}

AngleSample eval_angles(const TrajectoryDesign& design, double t) {
  const auto& th = design.theta();
  const auto& ph = design.phi();
  return {th.value(t),      ph.value(t),      th.derivative(t),
          ph.derivative(t), th.second_derivative(t), ph.second_derivative(t)};
}

}  // namespace spinflip
