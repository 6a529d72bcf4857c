#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "spinflip/hamiltonian.hpp"
#include "spinflip/states.hpp"
#include "spinflip/trajectory.hpp"

namespace spinflip {

/// Invariant I(t) = (g mu_B / 2) bc (n(t) . sigma) built on a design; bc (T)
/// only sets the energy scale.
struct InvariantSpec {
  double bc = 1.0;
  TrajectoryDesign design;
};

ComplexMatrix2 invariant_matrix(const InvariantSpec& spec, double t);

/// Analytic dI/dt from the polynomial derivatives.
ComplexMatrix2 invariant_time_derivative(const InvariantSpec& spec, double t);

/// chi+ = (cos(theta/2) e^{i phi}, sin(theta/2)), chi- = (sin(theta/2), -cos(theta/2) e^{-i phi}).
std::pair<SpinState, SpinState> chi_eigenstates(double theta, double phi);

/// Frobenius norm of dI/dt - [H, I]/(i hbar) with H from the designed fields (meV/ns).
double invariance_residual(const InvariantSpec& spec, double t);
/// Same with caller-supplied fields.
double invariance_residual(const InvariantSpec& spec, double t, const FieldTriple& fields);

enum class Branch { plus, minus };

/// Lewis-Riesenfeld phase alpha_n(t) by composite Simpson quadrature on
/// `nodes` points (>= 1001, rounded up to odd). Throws IntegratorError if
/// halving the node count moves the result by more than 1e-6 rad.
double lr_phase(const InvariantSpec& spec, Branch branch, double t, std::size_t nodes = 1001);

/// Closed-system propagation record.
struct Propagation {
  std::vector<double> times;
  std::vector<SpinState> states;
  std::size_t steps = 0;
  int order = 4;
  double max_norm_drift = 0.0;  ///< largest per-step |norm - 1| before renormalization

  const SpinState& final_state() const { return states.back(); }
};

/// RK4 integration of i hbar psi' = H(t) psi with fields from the closed-form
/// synthesis at every stage time. Requires steps >= 1000 and a normalized psi0.
/// Records every `record_every`-th node (the final node always). When
/// `check_convergence` is set, a second run at 2*steps must agree to 1e-8 or
/// IntegratorError is thrown.
Propagation propagate_schrodinger(const TrajectoryDesign& design, const SpinState& psi0,
                                  std::size_t steps, std::size_t record_every = 1,
                                  bool check_convergence = true);

/// |<-1|psi(tf)>|
double fidelity(const Propagation& prop);

/// (sqrt(1-eps) e^{i phi0}, sqrt(eps))
SpinState perturbed_initial_state(double epsilon, double phi0);

struct AnglePoint {
  double t = 0.0;
  double cos_theta = 1.0;
  std::optional<double> sin_phi;  ///< empty at the poles, where phi is undefined
};

/// Effective Bloch angles of a state (nullopt for sin phi when |w| > 1 - 1e-9).
AnglePoint bloch_angles(double t, const SpinState& s);

/// Propagates the perturbed initial state under the unmodified design.
std::vector<AnglePoint> perturbed_initial_evolution(const TrajectoryDesign& design,
                                                    double epsilon, double phi0,
                                                    std::size_t steps,
                                                    std::size_t record_every = 1);

}  // namespace spinflip
