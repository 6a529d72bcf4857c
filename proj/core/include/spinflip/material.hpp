#pragma once

namespace spinflip {

/// Spin-orbit and Zeeman parameters of the dot.
///
/// `hbar_alpha` / `hbar_beta` are the Rashba / Dresselhaus strengths in meV*cm;
/// the velocities alpha = hbar_alpha/hbar and beta = hbar_beta/hbar (cm/ns) are
/// what enter the field formulas. `g` is kept signed and eta = g*mu_B/hbar
/// inherits that sign. The xi factors renormalize the drive fields through the
/// higher orbital states and default to zero.
class MaterialParams {
 public:
  MaterialParams(double hbar_alpha, double hbar_beta, double g, double xi_x = 0.0,
                 double xi_y = 0.0);

  /// hbar*alpha = 2e-6 meV*cm, beta = alpha/2, g = -0.44 (GaAs), xi = 0.
  static MaterialParams gaas_default();

  double hbar_alpha() const { return hbar_alpha_; }
  double hbar_beta() const { return hbar_beta_; }
  double g() const { return g_; }
  double xi_x() const { return xi_x_; }
  double xi_y() const { return xi_y_; }

  double alpha() const { return alpha_; }  ///< cm/ns
  double beta() const { return beta_; }    ///< cm/ns
  double eta() const { return eta_; }      ///< 1/(T*ns), signed
  double beta_over_alpha() const { return beta_ / alpha_; }

  MaterialParams with_xi(double xi_x, double xi_y) const;

 private:
  double hbar_alpha_;
  double hbar_beta_;
  double g_;
  double xi_x_;
  double xi_y_;
  double alpha_;
  double beta_;
  double eta_;
};

}  // namespace spinflip
