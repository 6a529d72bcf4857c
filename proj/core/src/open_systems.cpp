#include "spinflip/open_systems.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/field_synthesis.hpp"
#include "spinflip/parallel.hpp"
#include "spinflip/rk4.hpp"

namespace spinflip {

namespace {

constexpr cplx kMinusIOverHbar{0.0, -1.0 / PhysicalConstants::hbar};

struct NoiseOps {
  std::array<ComplexMatrix2, 3> ops{};
  std::size_t count = 0;

  std::span<const ComplexMatrix2> span() const { return {ops.data(), count}; }
};

NoiseOps make_noise_ops(const FieldTriple& f, double b0, const MaterialParams& mat,
                        NoiseChannel channel) {
  const double s = 0.5 * mat.g() * PhysicalConstants::mu_B;
  const double zp = f.z - b0;
  NoiseOps n;
  if (channel == NoiseChannel::as_printed) {
    n.ops[0] = pauli::x() * (s * f.x);
    n.ops[1] = pauli::y() * (-s * f.y);
    n.ops[2] = pauli::z() * (s * zp);
    n.count = 3;
  } else {
    n.ops[0] = pauli::z() * (s * zp) + pauli::y() * (-s * f.y);
    n.count = 1;
  }
  return n;
}

ComplexMatrix2 double_commutator_sum(const ComplexMatrix2& rho,
                                     std::span<const ComplexMatrix2> ops) {
  ComplexMatrix2 acc;
  for (const auto& op : ops) acc += commutator(op, commutator(op, rho));
  return acc;
}

BlochVector precession(const BlochVector& r, const FieldTriple& f, double eta) {
  return {eta * (f.z * r.v - f.y * r.w), eta * (-f.z * r.u + f.x * r.w),
          eta * (f.y * r.u - f.x * r.v)};
}

BlochVector noise_dissipator(const BlochVector& r, const FieldTriple& f, double b0,
                             double lambda, double eta, NoiseChannel channel) {
  const double k = 0.5 * lambda * lambda * eta * eta;
  const double zp = f.z - b0;
  if (channel == NoiseChannel::as_printed) {
    return {-k * (f.y * f.y + zp * zp) * r.u, -k * (f.x * f.x + zp * zp) * r.v,
            -k * (f.x * f.x + f.y * f.y) * r.w};
  }
  // omega = (0, Y, Z') in the (u, v, w) frame; -(k)(|omega|^2 r - omega (omega . r))
  const double dot = f.y * r.v + zp * r.w;
  const double n2 = f.y * f.y + zp * zp;
  return {-k * n2 * r.u, -k * (n2 * r.v - f.y * dot), -k * (n2 * r.w - zp * dot)};
}

void require_steps(std::size_t steps, std::size_t minimum, const char* what) {
  if (steps < minimum) {
    throw std::invalid_argument(std::string(what) + ": need at least " +
                                std::to_string(minimum) + " steps");
  }
}

}  // namespace

std::string_view to_string(NoiseChannel c) {
  return c == NoiseChannel::as_printed ? "as-printed" : "x-only";
}

NoiseChannel parse_noise_channel(std::string_view s) {
  if (s == "as-printed") return NoiseChannel::as_printed;
  if (s == "x-only") return NoiseChannel::x_only;
  throw std::invalid_argument("unknown noise channel '" + std::string(s) +
                              "' (expected as-printed or x-only)");
}

double noise_lambda(double lambda0, double tf) { return lambda0 * std::sqrt(tf); }

ComplexMatrix2 lindblad_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h, double gamma) {
  auto out = commutator(h, rho) * kMinusIOverHbar;
  if (gamma != 0.0) {
    const std::array<ComplexMatrix2, 3> sig{pauli::x(), pauli::y(), pauli::z()};
    out -= double_commutator_sum(rho, sig) * (0.5 * gamma);
  }
  return out;
}

std::vector<ComplexMatrix2> noise_operators(const FieldTriple& fields, double b0,
                                            const MaterialParams& mat, NoiseChannel channel) {
  const auto n = make_noise_ops(fields, b0, mat, channel);
  return {n.ops.begin(), n.ops.begin() + static_cast<std::ptrdiff_t>(n.count)};
}

ComplexMatrix2 noise_master_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h,
                                std::span<const ComplexMatrix2> hprime, double lambda) {
  auto out = commutator(h, rho) * kMinusIOverHbar;
  const double k = lambda * lambda / (2.0 * PhysicalConstants::hbar * PhysicalConstants::hbar);
  if (k != 0.0) out -= double_commutator_sum(rho, hprime) * k;
  return out;
}

ComplexMatrix2 noise_master_rhs(const ComplexMatrix2& rho, const ComplexMatrix2& h,
                                const ComplexMatrix2& hprime, double lambda) {
  return noise_master_rhs(rho, h, std::span<const ComplexMatrix2>(&hprime, 1), lambda);
}

BlochVector bloch_rhs(const BlochVector& r, const FieldTriple& fields, double gamma,
                      const MaterialParams& mat) {
  return precession(r, fields, mat.eta()) + (-4.0 * gamma) * r;
}

BlochVector noise_bloch_rhs(const BlochVector& r, const FieldTriple& fields, double b0,
                            double lambda, const MaterialParams& mat, NoiseChannel channel) {
  return precession(r, fields, mat.eta()) +
         noise_dissipator(r, fields, b0, lambda, mat.eta(), channel);
}

double target_population(const BlochVector& r) { return 0.5 * (1.0 - r.w); }

BlochTrajectory propagate_bloch(const TrajectoryDesign& design, const OpenSystemParams& params,
                                const BlochVector& r0, std::size_t steps,
                                std::size_t record_every) {
  if (steps == 0 || record_every == 0) throw std::invalid_argument("steps must be positive");
  const auto& mat = design.material();
  const double lambda = noise_lambda(params.lambda0, design.tf());
  const double b0 = design.b0();
  BlochTrajectory out;
  auto generator = [&](double t) { return designed_fields(design, t); };
  auto apply = [&](const FieldTriple& f, const BlochVector& r) {
    auto d = bloch_rhs(r, f, params.gamma, mat);
    if (lambda != 0.0) d = d + noise_dissipator(r, f, b0, lambda, mat.eta(), params.channel);
    return d;
  };
  auto on_node = [&](std::size_t i, double t, BlochVector& r) {
    if (i % record_every == 0 || i == steps) {
      out.times.push_back(t);
      out.states.push_back(r);
    }
  };
  rk4_propagate(r0, 0.0, design.tf(), steps, generator, apply, on_node);
  return out;
}

DensityTrajectory propagate_density(const TrajectoryDesign& design,
                                    const OpenSystemParams& params, const DensityMatrix& rho0,
                                    std::size_t steps, std::size_t record_every) {
  if (steps == 0 || record_every == 0) throw std::invalid_argument("steps must be positive");
  const auto& mat = design.material();
  const double lambda = noise_lambda(params.lambda0, design.tf());
  const double k = lambda * lambda / (2.0 * PhysicalConstants::hbar * PhysicalConstants::hbar);

  struct Generator {
    ComplexMatrix2 h;
    NoiseOps noise;
  };
  auto generator = [&](double t) {
    const auto f = designed_fields(design, t);
    return Generator{build_heff(f, mat), make_noise_ops(f, design.b0(), mat, params.channel)};
  };
  auto apply = [&](const Generator& g, const ComplexMatrix2& rho) {
    auto d = lindblad_rhs(rho, g.h, params.gamma);
    if (k != 0.0) d -= double_commutator_sum(rho, g.noise.span()) * k;
    return d;
  };

  DensityTrajectory out;
  double last_purity = rho0.purity();
  auto on_node = [&](std::size_t i, double t, ComplexMatrix2& rho) {
    out.max_trace_error = std::max(out.max_trace_error, std::abs(rho.trace() - 1.0));
    out.max_hermiticity_defect = std::max(out.max_hermiticity_defect, rho.hermiticity_defect());
    // eigenvalues of the Hermitian part
    const auto herm = (rho + rho.adjoint()) * 0.5;
    out.min_eigenvalue = std::min(out.min_eigenvalue, hermitian_eigenvalues(herm).first);
    const double purity = (rho * rho).trace().real();
    out.max_purity_increase = std::max(out.max_purity_increase, purity - last_purity);
    last_purity = purity;
    if (i % record_every == 0 || i == steps) {
      out.times.push_back(t);
      out.states.push_back(rho);
    }
  };
  rk4_propagate(rho0.matrix(), 0.0, design.tf(), steps, generator, apply, on_node);
  return out;
}

MasterResult propagate_open(const TrajectoryDesign& design, const OpenSystemParams& params,
                            std::size_t steps, const BlochVector& r0) {
  require_steps(steps, 1000, "propagate_open");
  if (params.gamma < 0.0 || params.lambda0 < 0.0) {
    throw std::invalid_argument("gamma and lambda0 must be non-negative");
  }
  const auto coarse = propagate_bloch(design, params, r0, steps, steps).states.back();
  const auto fine = propagate_bloch(design, params, r0, 2 * steps, 2 * steps).states.back();
  const double diff = max_abs_diff(coarse, fine);
  if (diff >= 1e-8) {
    throw IntegratorError("master-equation propagation failed the step-doubling gate (change " +
                          std::to_string(diff) + ")");
  }
  MasterResult r;
  r.final_state = coarse;
  r.fidelity = target_population(coarse);
  r.amplitude_fidelity = std::sqrt(std::max(0.0, r.fidelity));
  r.steps = steps;
  return r;
}

MasterResult propagate_master(const TrajectoryDesign& design, double gamma, std::size_t steps) {
  return propagate_open(design, OpenSystemParams{gamma, 0.0, NoiseChannel::as_printed}, steps);
}

WienerIncrements::WienerIncrements(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

double WienerIncrements::operator()(double dt) { return std::sqrt(dt) * normal_(engine_); }

Propagation sse_trajectory(const TrajectoryDesign& design, const NoiseParams& noise,
                           std::size_t steps, std::uint64_t trajectory_index,
                           std::size_t record_every, const SpinState& psi0) {
  require_steps(steps, 10000, "sse_trajectory");
  if (record_every == 0) throw std::invalid_argument("record_every must be positive");
  if (noise.lambda0 < 0.0) throw std::invalid_argument("lambda0 must be non-negative");
  const auto& mat = design.material();
  const double tf = design.tf();
  const double lambda = noise_lambda(noise.lambda0, tf);
  const double dt = tf / static_cast<double>(steps);
  WienerIncrements dw(noise.seed ^ trajectory_index);

  struct Generator {
    ComplexMatrix2 g;  // -(i/hbar) H
    NoiseOps noise;
  };
  auto generator = [&](double t) {
    const auto f = designed_fields(design, t);
    return Generator{build_heff(f, mat) * kMinusIOverHbar,
                     make_noise_ops(f, design.b0(), mat, noise.channel)};
  };
  auto node_time = [&](std::size_t i) {
    return i == steps ? tf : tf * static_cast<double>(i) / static_cast<double>(steps);
  };

  Propagation prop;
  prop.steps = steps;
  prop.order = 1;
  SpinState y = psi0.normalized();
  prop.times.push_back(0.0);
  prop.states.push_back(y);
  auto g0 = generator(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = node_time(i);
    const double tn = node_time(i + 1);
    const auto gm = generator(0.5 * (t + tn));
    auto g1 = generator(tn);
    // deterministic RK4 step
    const SpinState k1 = g0.g * y;
    const SpinState k2 = gm.g * (y + (0.5 * dt) * k1);
    const SpinState k3 = gm.g * (y + (0.5 * dt) * k2);
    const SpinState k4 = g1.g * (y + dt * k3);
    y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    // noise kick exp(-i lambda sum_k H'_k dW_k / hbar)
    if (lambda != 0.0) {
      ComplexMatrix2 m;
      for (const auto& op : gm.noise.span()) m += op * dw(dt);
      y = unitary_exp(m * (lambda / PhysicalConstants::hbar)) * y;
    }
    const double n = y.norm();
    prop.max_norm_drift = std::max(prop.max_norm_drift, std::abs(n - 1.0));
    y = y.normalized();
    if ((i + 1) % record_every == 0 || i + 1 == steps) {
      prop.times.push_back(tn);
      prop.states.push_back(y);
    }
    g0 = std::move(g1);
  }
  return prop;
}

EnsembleResult ensemble_average(const TrajectoryDesign& design, const NoiseParams& noise,
                                std::size_t steps, std::size_t jobs, std::size_t record_every) {
  if (noise.n_traj < 100) throw std::invalid_argument("ensemble_average: need n_traj >= 100");
  const std::size_t n = noise.n_traj;
  std::vector<std::vector<BlochVector>> paths(n);
  std::vector<double> final_population(n);
  std::vector<double> times;
  parallel_for(n, jobs, [&](std::size_t k) {
    const auto prop = sse_trajectory(design, noise, steps, k, record_every);
    auto& path = paths[k];
    path.reserve(prop.states.size());
    for (const auto& s : prop.states) path.push_back(to_bloch(s));
    final_population[k] = target_population(path.back());
    if (k == 0) times = prop.times;
  });

  EnsembleResult out;
  out.n_traj = n;
  out.times = times;
  out.mean.assign(paths.front().size(), BlochVector{});
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < out.mean.size(); ++j) out.mean[j] = out.mean[j] + paths[k][j];
    sum += final_population[k];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& m : out.mean) m = inv * m;
  out.fidelity = sum * inv;
  double var = 0.0;
  for (double p : final_population) var += (p - out.fidelity) * (p - out.fidelity);
  var /= static_cast<double>(n - 1);
  out.standard_error = std::sqrt(var * inv);
  return out;
}

double perturbative_bound(double gamma, double tf) {
  return std::clamp(1.0 - 2.0 * gamma * tf, 0.0, 1.0);
}

}  // namespace spinflip
