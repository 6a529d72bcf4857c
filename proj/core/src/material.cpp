#include "spinflip/material.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"

namespace spinflip {

MaterialParams::MaterialParams(double hbar_alpha, double hbar_beta, double g, double xi_x,
                               double xi_y)
    : hbar_alpha_(hbar_alpha), hbar_beta_(hbar_beta), g_(g), xi_x_(xi_x), xi_y_(xi_y) {
  if (!std::isfinite(hbar_alpha) || hbar_alpha == 0.0) {
    throw std::invalid_argument("hbar_alpha must be finite and non-zero");
  }
  if (!std::isfinite(hbar_beta) || hbar_beta == 0.0) {
    throw std::invalid_argument("hbar_beta must be finite and non-zero");
  }
  if (!std::isfinite(g) || g == 0.0) {
    throw std::invalid_argument("g factor must be finite and non-zero");
  }
  if (!std::isfinite(xi_x) || !std::isfinite(xi_y) || xi_x <= -1.0 || xi_y <= -1.0) {
    throw std::invalid_argument("xi factors must be finite and greater than -1");
  }
  alpha_ = hbar_alpha_ / PhysicalConstants::hbar;
  beta_ = hbar_beta_ / PhysicalConstants::hbar;
  eta_ = g_ * PhysicalConstants::mu_B / PhysicalConstants::hbar;
}

MaterialParams MaterialParams::gaas_default() { return {2.0e-6, 1.0e-6, -0.44}; }

MaterialParams MaterialParams::with_xi(double xi_x, double xi_y) const {
  return {hbar_alpha_, hbar_beta_, g_, xi_x, xi_y};
}

}  // namespace spinflip
