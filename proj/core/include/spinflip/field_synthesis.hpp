#pragma once

#include <cstddef>
#include <vector>

#include "spinflip/hamiltonian.hpp"
#include "spinflip/trajectory.hpp"

namespace spinflip {

/// Effective drive fields B1, B2 in tesla.
struct DriveFields {
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Physical electric field in V/cm.
struct ElectricField {
  double ex = 0.0;
  double ey = 0.0;
};

struct FieldSample {
  double t = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double ex = 0.0;
  double ey = 0.0;
};

/// Zeros of alpha*cot(theta) - beta*sin(phi) on (0, tf).
struct SingularityReport {
  std::vector<double> times;
  std::vector<bool> cancellable;
  std::vector<double> numerator_residuals;

  std::size_t count() const { return times.size(); }
  bool all_cancellable() const;
};

/// Relative width of the window around a denominator zero inside which the
/// fields are taken from the ratio of derivatives.
inline constexpr double kSingularityGuard = 1e-6;
/// Fields within this fraction of tf from either end are interpolated to the
/// exact limit (zero) at the poles.
inline constexpr double kEndpointOffset = 1e-6;

/// alpha*cot(theta(t)) - beta*sin(phi(t)), in cm/ns.
double singularity_function(const TrajectoryDesign& design, double t);

/// B1 and B2 realizing the design at t in [0, tf]. Near a cancellable zero of
/// the denominator the two-sided limit is returned; a zero whose numerators
/// do not cancel throws SingularityError.
DriveFields effective_fields(const TrajectoryDesign& design, double t);

/// Left and right limits of (B1, B2) at ts, each extrapolated linearly from
/// the direct formula at ts -+ delta*tf and ts -+ 2 delta*tf.
struct TwoSidedLimit {
  DriveFields left;
  DriveFields right;

  /// max over B1, B2 of |left - right| / max(|left|, |right|)
  double relative_gap() const;
};
TwoSidedLimit two_sided_limits(const TrajectoryDesign& design, double ts, double delta = 1e-6);

/// X = B2(1+xi_y), Y = (alpha/beta)(1+xi_x)B1, Z = B0 + (1+xi_x)B1.
FieldTriple fields_xyz(double b1, double b2, double b0, const MaterialParams& mat);

/// fields_xyz(effective_fields(design, t)).
FieldTriple designed_fields(const TrajectoryDesign& design, double t);

/// Ex = g mu_B/(2 beta) dB1/dt, Ey = g mu_B/(2 alpha) dB2/dt, in V/cm. The time
/// derivative is a central difference with step 1e-5 tf, checked against the
/// half step; failure of that check throws IntegratorError.
ElectricField electric_fields(const TrajectoryDesign& design, double t);

/// `samples` uniform nodes on [0, tf] including both ends (samples >= 2).
std::vector<FieldSample> sample_fields(const TrajectoryDesign& design, std::size_t samples);

/// Locates every sign change of the denominator on a `grid`-cell scan
/// (grid >= 100), refines each by bisection and checks numerator cancellation.
SingularityReport detect_singularities(const TrajectoryDesign& design, std::size_t grid);

/// max(|numerator of B1|, |numerator of B2|) at ts.
double verify_cancellation(const TrajectoryDesign& design, double ts);

/// Threshold below which verify_cancellation counts as cancelled.
double cancellation_tolerance(const TrajectoryDesign& design, double ts);

/// Largest B0 for which the design has a single, cancellable singularity.
/// Throws std::invalid_argument if the predicate still holds at b0_hi.
double compute_b0_max(double tf, const MaterialParams& mat, double b0_hi,
                      std::size_t grid = 1001);

}  // namespace spinflip
