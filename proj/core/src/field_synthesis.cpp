#include "spinflip/field_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"

namespace spinflip {

namespace {

// Numerators of B1, B2 (without the eta(1+xi) factor of the denominator),
// the denominator function f and their first time derivatives.
struct SynthesisTerms {
  double n1, n2, f;
  double dn1, dn2, df;
};

SynthesisTerms synthesis_terms(const TrajectoryDesign& d, double t) {
  const auto a = eval_angles(d, t);
  const auto& mat = d.material();
  const double al = mat.alpha();
  const double be = mat.beta();
  const double drive = a.phi_dot + mat.eta() * d.b0();

  const double s = std::sin(a.theta);
  const double cot = std::cos(a.theta) / s;
  const double dcot = -a.theta_dot / (s * s);
  const double sp = std::sin(a.phi);
  const double cp = std::cos(a.phi);

  SynthesisTerms r{};
  r.n1 = be * (-a.theta_dot * cot * cp + drive * sp);
  r.n2 = al * a.theta_dot * cot * sp + al * drive * cp - be * a.theta_dot;
  r.f = al * cot - be * sp;
  r.dn1 = be * (-a.theta_ddot * cot * cp - a.theta_dot * dcot * cp +
                a.theta_dot * cot * sp * a.phi_dot + a.phi_ddot * sp + drive * cp * a.phi_dot);
  r.dn2 = al * (a.theta_ddot * cot * sp + a.theta_dot * dcot * sp +
                a.theta_dot * cot * cp * a.phi_dot) +
          al * (a.phi_ddot * cp - drive * sp * a.phi_dot) - be * a.theta_ddot;
  r.df = al * dcot - be * cp * a.phi_dot;
  return r;
}

void check_time(const TrajectoryDesign& d, double t) {
  if (!(t >= 0.0 && t <= d.tf())) {
    throw std::invalid_argument("field evaluation time outside [0, tf]");
  }
}

DriveFields interior_fields(const TrajectoryDesign& d, double t) {
  const auto& mat = d.material();
  const double kx = mat.eta() * (1.0 + mat.xi_x());
  const double ky = mat.eta() * (1.0 + mat.xi_y());
  const auto terms = synthesis_terms(d, t);

  if (std::abs(terms.f) >= kSingularityGuard * std::abs(mat.alpha())) {
    return {terms.n1 / (kx * terms.f), terms.n2 / (ky * terms.f)};
  }

  // Inside the guard window: locate the zero, check that the numerators
  // vanish there, then use N(t)/D(t) = N'(t_m)/D'(t_m) + O((t - t_s)^2) with
  // t_m the midpoint between t and the zero.
  double ts = t;
  for (int it = 0; it < 3; ++it) {
    const auto s = synthesis_terms(d, ts);
    if (s.df == 0.0) throw SingularityError(ts, std::max(std::abs(s.n1), std::abs(s.n2)));
    ts = std::clamp(ts - s.f / s.df, 0.5 * kEndpointOffset * d.tf(),
                    d.tf() * (1.0 - 0.5 * kEndpointOffset));
  }
  const double residual = verify_cancellation(d, ts);
  if (residual > cancellation_tolerance(d, ts)) throw SingularityError(ts, residual);

  const auto m = synthesis_terms(d, 0.5 * (t + ts));
  if (m.df == 0.0) throw SingularityError(ts, residual);
  return {m.dn1 / (kx * m.df), m.dn2 / (ky * m.df)};
}

}  // namespace

bool SingularityReport::all_cancellable() const {
  return std::all_of(cancellable.begin(), cancellable.end(), [](bool b) { return b; });
}

double singularity_function(const TrajectoryDesign& design, double t) {
  const auto a = eval_angles(design, t);
  const auto& mat = design.material();
  return mat.alpha() * std::cos(a.theta) / std::sin(a.theta) - mat.beta() * std::sin(a.phi);
}

DriveFields effective_fields(const TrajectoryDesign& design, double t) {
  check_time(design, t);
  const double tf = design.tf();
  const double edge = kEndpointOffset * tf;
  // B1 and B2 vanish at the poles (theta = 0, pi with zero slope); close to
  // them the formula loses all precision, so interpolate linearly to zero.
  if (t < edge) {
    const auto e = interior_fields(design, edge);
    const double w = t / edge;
    return {w * e.b1, w * e.b2};
  }
  if (t > tf - edge) {
    const auto e = interior_fields(design, tf - edge);
    const double w = (tf - t) / edge;
    return {w * e.b1, w * e.b2};
  }
  return interior_fields(design, t);
}

FieldTriple fields_xyz(double b1, double b2, double b0, const MaterialParams& mat) {
  const double b1r = (1.0 + mat.xi_x()) * b1;
  return {(1.0 + mat.xi_y()) * b2, b1r / mat.beta_over_alpha(), b0 + b1r};
}

FieldTriple designed_fields(const TrajectoryDesign& design, double t) {
  const auto b = effective_fields(design, t);
  return fields_xyz(b.b1, b.b2, design.b0(), design.material());
}

double TwoSidedLimit::relative_gap() const {
  auto rel = [](double a, double b) {
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? 0.0 : std::abs(a - b) / m;
  };
  return std::max(rel(left.b1, right.b1), rel(left.b2, right.b2));
}

TwoSidedLimit two_sided_limits(const TrajectoryDesign& design, double ts, double delta) {
  const double h = delta * design.tf();
  auto extrapolate = [&](double sign) {
    const auto a = effective_fields(design, ts + sign * h);
    const auto b = effective_fields(design, ts + sign * 2.0 * h);
    return DriveFields{2.0 * a.b1 - b.b1, 2.0 * a.b2 - b.b2};
  };
  return {extrapolate(-1.0), extrapolate(1.0)};
}

ElectricField electric_fields(const TrajectoryDesign& design, double t) {
  check_time(design, t);
  const double tf = design.tf();
  const double h = 1e-5 * tf;

  auto at = [&](double s) { return effective_fields(design, std::clamp(s, 0.0, tf)); };

  // Returns (dB1/dt, dB2/dt) with step `step`, one-sided near the ends.
  auto derivative = [&](double step) -> DriveFields {
    if (t - step < 0.0) {
      const auto f0 = at(t), f1 = at(t + step), f2 = at(t + 2.0 * step);
      return {(-3.0 * f0.b1 + 4.0 * f1.b1 - f2.b1) / (2.0 * step),
              (-3.0 * f0.b2 + 4.0 * f1.b2 - f2.b2) / (2.0 * step)};
    }
    if (t + step > tf) {
      const auto f0 = at(t), f1 = at(t - step), f2 = at(t - 2.0 * step);
      return {(3.0 * f0.b1 - 4.0 * f1.b1 + f2.b1) / (2.0 * step),
              (3.0 * f0.b2 - 4.0 * f1.b2 + f2.b2) / (2.0 * step)};
    }
    const auto fp = at(t + step), fm = at(t - step);
    return {(fp.b1 - fm.b1) / (2.0 * step), (fp.b2 - fm.b2) / (2.0 * step)};
  };

  const auto d1 = derivative(h);
  const auto d2 = derivative(0.5 * h);

  // Relative to the size of the derivative vector; the floor is the natural
  // rate pi / (|eta| tf^2) of a field that turns the spin in tf.
  const double natural = pi / (std::abs(design.material().eta()) * tf * tf);
  const double size = std::max({std::abs(d1.b1), std::abs(d1.b2), std::abs(d2.b1),
                                std::abs(d2.b2), 1e-6 * natural});
  if (std::abs(d1.b1 - d2.b1) > 1e-4 * size || std::abs(d1.b2 - d2.b2) > 1e-4 * size) {
    throw IntegratorError("electric field derivative did not converge under step halving");
  }

  // Richardson combination of the two steps.
  const double db1 = (4.0 * d2.b1 - d1.b1) / 3.0;
  const double db2 = (4.0 * d2.b2 - d1.b2) / 3.0;
  const auto& mat = design.material();
  const double gmu = mat.g() * PhysicalConstants::mu_B;
  return {gmu / (2.0 * mat.beta()) * db1 * PhysicalConstants::volt_conv,
          gmu / (2.0 * mat.alpha()) * db2 * PhysicalConstants::volt_conv};
}

std::vector<FieldSample> sample_fields(const TrajectoryDesign& design, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<FieldSample> out;
  out.reserve(samples);
  const double tf = design.tf();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = (i + 1 == samples) ? tf : tf * static_cast<double>(i) / (samples - 1);
    const auto b = effective_fields(design, t);
    const auto e = electric_fields(design, t);
    out.push_back({t, b.b1, b.b2, e.ex, e.ey});
  }
  return out;
}

double verify_cancellation(const TrajectoryDesign& design, double ts) {
  const auto s = synthesis_terms(design, ts);
  return std::max(std::abs(s.n1), std::abs(s.n2));
}

double cancellation_tolerance(const TrajectoryDesign& design, double ts) {
  const auto a = eval_angles(design, ts);
  const auto& mat = design.material();
  const double drive = a.phi_dot + mat.eta() * design.b0();
  return 1e-8 * (std::abs(mat.alpha()) + std::abs(mat.beta())) *
         (std::abs(a.theta_dot) + std::abs(drive));
}

SingularityReport detect_singularities(const TrajectoryDesign& design, std::size_t grid) {
  if (grid < 100) throw std::invalid_argument("singularity scan grid must be >= 100");
  const double tf = design.tf();
  const double target = 1e-10 * std::abs(design.material().alpha());
  auto f = [&](double t) { return singularity_function(design, t); };

  std::vector<double> nodes(grid);
  std::vector<double> values(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    nodes[i] = tf * (static_cast<double>(i) + 0.5) / static_cast<double>(grid);
    values[i] = f(nodes[i]);
  }

  SingularityReport report;
  auto add_root = [&](double ts) {
    if (!report.times.empty() && std::abs(report.times.back() - ts) < 1e-9 * tf) return;
    const double residual = verify_cancellation(design, ts);
    report.times.push_back(ts);
    report.numerator_residuals.push_back(residual);
    report.cancellable.push_back(residual <= cancellation_tolerance(design, ts));
  };

  for (std::size_t i = 0; i < grid; ++i) {
    if (values[i] == 0.0) {
      add_root(nodes[i]);
      continue;
    }
    if (i + 1 == grid || values[i + 1] == 0.0) continue;
    if ((values[i] < 0.0) == (values[i + 1] < 0.0)) continue;

    double lo = nodes[i], hi = nodes[i + 1];
    double flo = values[i];
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (std::abs(fm) < target || hi - lo <= 1e-15 * tf) break;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    add_root(mid);
  }
  return report;
}

double compute_b0_max(double tf, const MaterialParams& mat, double b0_hi, std::size_t grid) {
  if (!(tf > 0.0)) throw std::invalid_argument("tf must be positive");
  if (!(b0_hi > 0.0) || !std::isfinite(b0_hi)) {
    throw std::invalid_argument("b0_hi must be positive");
  }
  auto admissible = [&](double b0) {
    const auto report = detect_singularities(TrajectoryDesign::make(tf, b0, mat), grid);
    return report.count() == 1 && report.all_cancellable();
  };
  if (admissible(b0_hi)) {
    throw std::invalid_argument(
        "compute_b0_max: design is still admissible at b0_hi; raise the bracket");
  }
  if (!admissible(0.0)) throw std::invalid_argument("compute_b0_max: no admissible B0 >= 0");

  // Coarse scan for the first inadmissible field, then bisection.
  constexpr int kScan = 64;
  double lo = 0.0, hi = b0_hi;
  for (int k = 1; k <= kScan; ++k) {
    const double b = b0_hi * k / kScan;
    if (!admissible(b)) {
      hi = b;
      break;
    }
    lo = b;
  }
  while (hi - lo > 1e-7 * std::max(1.0, hi)) {
    const double m = 0.5 * (lo + hi);
    if (admissible(m)) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return lo;
}

}  // namespace spinflip
