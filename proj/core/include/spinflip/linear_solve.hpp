#pragma once

#include <array>

namespace spinflip {

using Matrix4d = std::array<std::array<double, 4>, 4>;

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws std::domain_error when a pivot vanishes.
std::array<double, 4> solve_linear4(Matrix4d a, std::array<double, 4> b);

}  // namespace spinflip
