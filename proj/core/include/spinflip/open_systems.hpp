#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "spinflip/hamiltonian.hpp"
#include "spinflip/invariant.hpp"
#include "spinflip/states.hpp"
#include "spinflip/trajectory.hpp"

namespace spinflip {

struct LindbladParams {
  double gamma = 0.0;  ///< dephasing rate, 1/ns
};

/// How the source-noise operator H' is built from the drive.
///  - as_printed: independent noise on each of the X, Y and Z' = Z - B0
///    components; its Bloch dissipator is the diagonal matrix
///    -(1/2) lambda^2 eta^2 diag(Y^2+Z'^2, X^2+Z'^2, X^2+Y^2).
///  - x_only: a single H' from the B1-dependent part (Y and Z'), i.e. a noisy
///    field along x; the full double commutator including its off-diagonal
///    couplings.
enum class NoiseChannel { as_printed, x_only };

std::string_view to_string(NoiseChannel c);
/// Accepts "as-printed" and "x-only"; throws std::invalid_argument otherwise.
NoiseChannel parse_noise_channel(std::string_view s);

struct NoiseParams {
  double lambda0 = 0.0;  ///< dimensionless strength, lambda = lambda0 sqrt(tf / ns)
  NoiseChannel channel = NoiseChannel::as_printed;
  std::uint64_t seed = 0;
  std::size_t n_traj = 1;
};

/// lambda = lambda0 * sqrt(tf), in sqrt(ns).
double noise_lambda(double lambda0, double tf);

/// Combined dissipation parameters for deterministic propagation.
struct OpenSystemParams {
  double gamma = 0.0;
  double lambda0 = 0.0;
  NoiseChannel channel = NoiseChannel::as_printed;
};

/// -(i/hbar)[H, rho] - (gamma/2) sum_i [sigma_i, [sigma_i, rho]]
ComplexMatrix2 lindblad_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h, double gamma);

/// H' operators (meV) of the channel at the given fields.
std::vector<ComplexMatrix2> noise_operators(const FieldTriple& fields, double b0,
                                            const MaterialParams& mat, NoiseChannel channel);

/// -(i/hbar)[H, rho] - (lambda^2 / 2 hbar^2) sum_k [H'_k, [H'_k, rho]]
ComplexMatrix2 noise_master_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h,
                                std::span<const ComplexMatrix2> hprime, double lambda);
ComplexMatrix2 noise_master_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h,
                                const ComplexMatrix2& hprime, double lambda);

/// Dephasing Bloch equation: precession about eta(X, Y, Z) plus -4 gamma decay.
BlochVector bloch_rhs(const BlochVector& r, const FieldTriple& fields, double gamma,
                      const MaterialParams& mat);

/// Source-noise Bloch equation (no dephasing term).
BlochVector noise_bloch_rhs(const BlochVector& r, const FieldTriple& fields, double b0,
                            double lambda, const MaterialParams& mat,
                            NoiseChannel channel = NoiseChannel::as_printed);

/// Fidelity used for open-system curves: population <-1|rho|-1> = (1 - w)/2.
double target_population(const BlochVector& r);

struct BlochTrajectory {
  std::vector<double> times;
  std::vector<BlochVector> states;
};

/// RK4 on the Bloch equations with both dissipators.
BlochTrajectory propagate_bloch(const TrajectoryDesign& design, const OpenSystemParams& params,
                                const BlochVector& r0, std::size_t steps,
                                std::size_t record_every = 1);

/// Density-matrix propagation record with physicality diagnostics over all nodes.
struct DensityTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix2> states;
  double max_trace_error = 0.0;
  double min_eigenvalue = 1.0;
  double max_purity_increase = 0.0;  ///< largest step-to-step purity gain
  double max_hermiticity_defect = 0.0;
};

/// RK4 on the density-matrix master equation with both dissipators.
DensityTrajectory propagate_density(const TrajectoryDesign& design,
                                    const OpenSystemParams& params, const DensityMatrix& rho0,
                                    std::size_t steps, std::size_t record_every = 1);

struct MasterResult {
  BlochVector final_state;
  double fidelity = 0.0;            ///< (1 - w)/2
  double amplitude_fidelity = 0.0;  ///< sqrt((1 - w)/2)
  std::size_t steps = 0;
};

/// Bloch propagation from r0 with a step-doubling gate (final states agree
/// to 1e-8, otherwise IntegratorError). Requires steps >= 1000.
MasterResult propagate_open(const TrajectoryDesign& design, const OpenSystemParams& params,
                            std::size_t steps, const BlochVector& r0 = {0.0, 0.0, 1.0});

/// Dephasing-only propagation from spin up.
MasterResult propagate_master(const TrajectoryDesign& design, double gamma, std::size_t steps);

/// Gaussian Wiener increments dW ~ N(0, dt) from a seeded generator.
class WienerIncrements {
 public:
  explicit WienerIncrements(std::uint64_t seed);
  double operator()(double dt);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One stochastic trajectory. Each step is a deterministic RK4 step followed
/// by the unitary kick exp(-i lambda sum_k H'_k(t_mid) dW_k / hbar); to first
/// order in dt and dW this is the stochastic Schrodinger increment, and with
/// lambda0 = 0 it reduces exactly to the closed-system RK4 propagation. The
/// generator is seeded with seed xor trajectory_index. Requires steps >= 1e4.
Propagation sse_trajectory(const TrajectoryDesign& design, const NoiseParams& noise,
                           std::size_t steps, std::uint64_t trajectory_index = 0,
                           std::size_t record_every = 1, const SpinState& psi0 = SpinState::spin_up());

struct EnsembleResult {
  std::vector<double> times;
  std::vector<BlochVector> mean;  ///< mean Bloch vector at the recorded nodes
  double fidelity = 0.0;          ///< mean final (1 - w)/2
  double standard_error = 0.0;
  std::size_t n_traj = 0;
};

/// Averages noise.n_traj (>= 100) trajectories on `jobs` workers (0 = all
/// cores). Reduction runs in trajectory order, so the result does not
/// depend on the worker count.
EnsembleResult ensemble_average(const TrajectoryDesign& design, const NoiseParams& noise,
                                std::size_t steps, std::size_t jobs = 0,
                                std::size_t record_every = 100);

/// 1 - 2 gamma tf clamped to [0, 1].
double perturbative_bound(double gamma, double tf);

}  // namespace spinflip
