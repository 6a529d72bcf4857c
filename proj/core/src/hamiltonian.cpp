#include "spinflip/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"

namespace spinflip {

ComplexMatrix2 build_heff(const FieldTriple& f, const MaterialParams& mat) {
  if (!std::isfinite(f.x) || !std::isfinite(f.y) || !std::isfinite(f.z)) {
    throw std::invalid_argument("build_heff: non-finite field component");
  }
  const double s = 0.5 * mat.g() * PhysicalConstants::mu_B;
  return ComplexMatrix2::hermitian(s * f.z, s * cplx(f.x, f.y), -s * f.z);
}

double zeeman_splitting(double g, double b0) { return g * PhysicalConstants::mu_B * b0; }

}  // namespace spinflip
