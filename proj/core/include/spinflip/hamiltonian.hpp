#pragma once

#include "spinflip/material.hpp"
#include "spinflip/matrix2.hpp"

namespace spinflip {

/// Effective magnetic field components (T) entering the 2x2 Hamiltonian.
struct FieldTriple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// H = (g mu_B / 2) [[Z, X + iY], [X - iY, -Z]] in meV.
/// Throws std::invalid_argument on non-finite fields.
ComplexMatrix2 build_heff(const FieldTriple& fields, const MaterialParams& mat);

/// Signed Zeeman splitting g*mu_B*B0 in meV.
double zeeman_splitting(double g, double b0);

}  // namespace spinflip
