#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "spinflip/material.hpp"
#include "spinflip/matrix2.hpp"

namespace spinflip {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

/// Two spin-split orbital doublets coupled by the drive and spin-orbit terms.
///
/// The drive enters through the effective fields (B1, B2) in tesla; the
/// equivalent vector-potential terms are (e/c)A_x = -g mu_B B1 / (2 beta) and
/// (e/c)A_y = -g mu_B B2 / (2 alpha), which reproduce the 2x2 Hamiltonian
/// when the upper doublet is dropped.
struct FourLevelModel {
  double e1 = 0.0;       ///< meV
  double e2 = 1.0;       ///< meV
  double delta_z = 0.0;  ///< meV, signed
  cplx pbar_x{};         ///< <psi1|p_x|psi2>, meV*ns/cm
  cplx pbar_y{};
  double m = 1.0;  ///< meV*ns^2/cm^2
  double drive_b1 = 0.0;
  double drive_b2 = 0.0;
  MaterialParams mat = MaterialParams::gaas_default();

  /// Throws std::invalid_argument unless e2 > e1, m > 0 and all values finite.
  void validate() const;

  double gap() const { return e2 - e1; }
  double eax() const;  ///< (e/c) A_x, meV*ns/cm
  double eay() const;
  double atilde_x() const { return eax() / m; }  ///< e A_x / (m c), cm/ns
  double atilde_y() const { return eay() / m; }
};

struct BlockPartition {
  ComplexMatrix2 q;  ///< lower doublet
  ComplexMatrix2 b;  ///< upper doublet
  ComplexMatrix2 c;  ///< upper-right coupling block

  Matrix4c reassemble() const;  ///< [[Q, C], [C^dagger, B]]
};

Matrix4c build_full_hamiltonian(const FourLevelModel& model);

/// Exact block extraction; the lower-left block is implied by hermiticity.
BlockPartition partition(const Matrix4c& h4);

/// Q + C (e_ref - B)^-1 C^dagger. Throws DegenerateReferenceError when
/// e_ref - B is singular (condition number above 1e12).
ComplexMatrix2 lowdin_reduce(const BlockPartition& p, double e_ref);

/// Iterates e_ref <- k-th eigenvalue of the reduced matrix, separately for
/// both branches. Returns the converged (lower, upper) energies.
std::array<double, 2> lowdin_self_consistent(const BlockPartition& p, double e_ref0,
                                             std::size_t iterations = 5);

/// Ascending eigenvalues of the full Hamiltonian.
std::array<double, 4> full_spectrum(const Matrix4c& h4);

struct XiFactors {
  double xi_x = 0.0;
  double xi_y = 0.0;
};

/// xi_i = 2 |pbar_i|^2 / (m (E2 - E1)).
XiFactors xi_factors(const FourLevelModel& model);

struct ValidityReport {
  double drive_ratio = 0.0;  ///< max(|A~x pbar_x|, |A~y pbar_y|) / (E2 - E1)
  bool drive_ok = true;      ///< drive_ratio <= 0.1
};

ValidityReport validity_check(const FourLevelModel& model);

/// hbar / (tf * gap); the orbital motion follows adiabatically when << 1.
double orbital_adiabaticity(double tf, double gap);

/// The first-order closed-form effective matrix of the reduction, kept as a
/// cross-check only: its diagonal uses Delta_z rather than Delta_z / 2.
ComplexMatrix2 first_order_closed_form(const FourLevelModel& model);

}  // namespace spinflip
