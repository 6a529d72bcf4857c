#pragma once

namespace spinflip {

/// Physical constants in the toolkit's unit system: meV, ns, T, cm, K, with
/// the elementary charge set to one. Electric fields come out in meV/(e*cm)
/// and are reported in V/cm via `volt_conv`.
struct PhysicalConstants {
  static constexpr double mu_B = 5.788381806e-2;   ///< Bohr magneton, meV/T
  static constexpr double hbar = 6.582119569e-4;   ///< meV*ns
  static constexpr double k_B = 8.617333262e-2;    ///< meV/K
  static constexpr double volt_conv = 1.0e-3;      ///< meV/(e*cm) -> V/cm
};

inline constexpr double pi = 3.14159265358979323846;

}  // namespace spinflip
