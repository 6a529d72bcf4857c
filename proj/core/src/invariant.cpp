#include "spinflip/invariant.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/field_synthesis.hpp"
#include "spinflip/rk4.hpp"

namespace spinflip {

namespace {

double invariant_scale(const InvariantSpec& spec) {
  return 0.5 * spec.design.material().g() * PhysicalConstants::mu_B * spec.bc;
}

ComplexMatrix2 schrodinger_generator(const ComplexMatrix2& h) {
  // psi' = -(i/hbar) H psi
  return h * cplx(0.0, -1.0 / PhysicalConstants::hbar);
}

SpinState run_rk4(const TrajectoryDesign& design, const SpinState& psi0, std::size_t steps,
                  std::size_t record_every, Propagation* record) {
  const auto& mat = design.material();
  double drift = 0.0;
  auto generator = [&](double t) {
    return schrodinger_generator(build_heff(designed_fields(design, t), mat));
  };
  auto apply = [](const ComplexMatrix2& g, const SpinState& y) { return g * y; };
  auto on_node = [&](std::size_t i, double t, SpinState& y) {
    if (i > 0) {
      const double n = y.norm();
      drift = std::max(drift, std::abs(n - 1.0));
      y = y.normalized();
    }
    if (record != nullptr && (i % record_every == 0 || i == steps)) {
      record->times.push_back(t);
      record->states.push_back(y);
    }
  };
  auto out = rk4_propagate(psi0, 0.0, design.tf(), steps, generator, apply, on_node);
  if (record != nullptr) record->max_norm_drift = drift;
  return out;
}

}  // namespace

ComplexMatrix2 invariant_matrix(const InvariantSpec& spec, double t) {
  const auto a = eval_angles(spec.design, t);
  const double k = invariant_scale(spec);
  const double c = std::cos(a.theta);
  return ComplexMatrix2::hermitian(k * c, k * std::sin(a.theta) * std::polar(1.0, a.phi),
                                   -k * c);
}

ComplexMatrix2 invariant_time_derivative(const InvariantSpec& spec, double t) {
  const auto a = eval_angles(spec.design, t);
  const double k = invariant_scale(spec);
  const double s = std::sin(a.theta);
  const double c = std::cos(a.theta);
  const cplx off = cplx(c * a.theta_dot, s * a.phi_dot) * std::polar(1.0, a.phi);
  return ComplexMatrix2::hermitian(-k * s * a.theta_dot, k * off, k * s * a.theta_dot);
}

std::pair<SpinState, SpinState> chi_eigenstates(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return {SpinState{c * std::polar(1.0, phi), s}, SpinState{s, -c * std::polar(1.0, -phi)}};
}

double invariance_residual(const InvariantSpec& spec, double t, const FieldTriple& fields) {
  const auto h = build_heff(fields, spec.design.material());
  const auto i_mat = invariant_matrix(spec, t);
  // dI/dt - [H, I]/(i hbar) = dI/dt + (i/hbar)[H, I]
  const auto r = invariant_time_derivative(spec, t) +
                 commutator(h, i_mat) * cplx(0.0, 1.0 / PhysicalConstants::hbar);
  return r.frobenius_norm();
}

double invariance_residual(const InvariantSpec& spec, double t) {
  return invariance_residual(spec, t, designed_fields(spec.design, t));
}

double lr_phase(const InvariantSpec& spec, Branch branch, double t, std::size_t nodes) {
  const auto& design = spec.design;
  if (!(t >= 0.0 && t <= design.tf())) throw std::invalid_argument("lr_phase: t outside [0, tf]");
  if (nodes < 1001) throw std::invalid_argument("lr_phase: need at least 1001 nodes");
  if (t == 0.0) return 0.0;
  if (nodes % 2 == 0) ++nodes;

  const auto& mat = design.material();
  // (1/hbar) <chi| i hbar d/dt - H |chi> = Re(i <chi|dchi/dt>) - <chi|H|chi>/hbar
  auto integrand = [&](double s) {
    const auto a = eval_angles(design, s);
    const double c = std::cos(0.5 * a.theta);
    const double sn = std::sin(0.5 * a.theta);
    SpinState chi, dchi;
    if (branch == Branch::plus) {
      chi = {c * std::polar(1.0, a.phi), sn};
      dchi = {cplx(-0.5 * a.theta_dot * sn, a.phi_dot * c) * std::polar(1.0, a.phi),
              0.5 * a.theta_dot * c};
    } else {
      chi = {sn, -c * std::polar(1.0, -a.phi)};
      dchi = {0.5 * a.theta_dot * c,
              cplx(0.5 * a.theta_dot * sn, a.phi_dot * c) * std::polar(1.0, -a.phi)};
    }
    const auto h = build_heff(designed_fields(design, s), mat);
    const cplx geometric = cplx(0.0, 1.0) * inner(chi, dchi);
    const cplx dynamic = inner(chi, h * chi) / PhysicalConstants::hbar;
    return (geometric - dynamic).real();
  };

  auto simpson = [&](std::size_t n) {
    const double h = t / static_cast<double>(n - 1);
    double sum = integrand(0.0) + integrand(t);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(t * static_cast<double>(i) / (n - 1));
    }
    return sum * h / 3.0;
  };

  const double fine = simpson(nodes);
  const double coarse = simpson((nodes - 1) / 2 + 1 + (((nodes - 1) / 2) % 2 == 1 ? 1 : 0));
  if (std::abs(fine - coarse) > 1e-6) {
    throw IntegratorError("Lewis-Riesenfeld phase quadrature did not converge");
  }
  return fine;
}

Propagation propagate_schrodinger(const TrajectoryDesign& design, const SpinState& psi0,
                                  std::size_t steps, std::size_t record_every,
                                  bool check_convergence) {
  if (steps < 1000) throw std::invalid_argument("propagate_schrodinger: steps must be >= 1000");
  if (record_every == 0) throw std::invalid_argument("record_every must be positive");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("propagate_schrodinger: initial state not normalized");
  }
  Propagation prop;
  prop.steps = steps;
  const auto final_state = run_rk4(design, psi0, steps, record_every, &prop);
  if (check_convergence) {
    const auto refined = run_rk4(design, psi0, 2 * steps, 1, nullptr);
    const double diff = distance(final_state, refined);
    if (diff >= 1e-8) {
      throw IntegratorError("Schrodinger propagation failed the step-doubling gate (change " +
                            std::to_string(diff) + ")");
    }
  }
  return prop;
}

double fidelity(const Propagation& prop) {
  if (prop.states.empty()) throw std::invalid_argument("fidelity of an empty propagation");
  return std::abs(prop.final_state().down);
}

SpinState perturbed_initial_state(double epsilon, double phi0) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  return {std::sqrt(1.0 - epsilon) * std::polar(1.0, phi0), std::sqrt(epsilon)};
}

AnglePoint bloch_angles(double t, const SpinState& s) {
  const auto r = to_bloch(s.normalized());
  AnglePoint p{t, r.w, std::nullopt};
  if (std::abs(r.w) <= 1.0 - 1e-9) {
    p.sin_phi = r.v / std::hypot(r.u, r.v);
  }
  return p;
}

std::vector<AnglePoint> perturbed_initial_evolution(const TrajectoryDesign& design,
                                                    double epsilon, double phi0,
                                                    std::size_t steps,
                                                    std::size_t record_every) {
  const auto prop = propagate_schrodinger(design, perturbed_initial_state(epsilon, phi0), steps,
                                          record_every);
  std::vector<AnglePoint> out;
  out.reserve(prop.states.size());
  for (std::size_t i = 0; i < prop.states.size(); ++i) {
    out.push_back(bloch_angles(prop.times[i], prop.states[i]));
  }
  return out;
}

}  // namespace spinflip
