#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/field_synthesis.hpp"

using namespace spinflip;
using doctest::Approx;

namespace {

const MaterialParams kMat = MaterialParams::gaas_default();

// Forward evaluation of the auxiliary equations for theta_dot, phi_dot.
std::pair<double, double> auxiliary_rates(const TrajectoryDesign& d, double t) {
  const auto a = eval_angles(d, t);
  const auto f = designed_fields(d, t);
  const double eta = d.material().eta();
  const double cot = std::cos(a.theta) / std::sin(a.theta);
  const double sp = std::sin(a.phi);
  const double cp = std::cos(a.phi);
  return {eta * (f.x * sp - f.y * cp), eta * (f.x * cp * cot + f.y * sp * cot - f.z)};
}

}  // namespace

TEST_CASE("synthesized fields reproduce the design rates") {
  for (double b0 : {0.15, 1.05}) {
    const auto d = TrajectoryDesign::make(1.0, b0, kMat);
    double worst = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double t = i / 1000.0;
      const auto a = eval_angles(d, t);
      const auto [th, ph] = auxiliary_rates(d, t);
      worst = std::max(worst, std::abs(th - a.theta_dot) / std::abs(a.theta_dot));
      worst = std::max(worst, std::abs(ph - a.phi_dot) / std::abs(a.phi_dot));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("singular point at tf/2") {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  CHECK(std::abs(singularity_function(d, 0.5)) < 1e-12 * kMat.alpha());
  const auto f = effective_fields(d, 0.5);
  CHECK(std::isfinite(f.b1));
  CHECK(std::isfinite(f.b2));

  for (double b0 : {0.15, 1.05}) {
    const auto dd = TrajectoryDesign::make(1.0, b0, kMat);
    const auto lim = two_sided_limits(dd, 0.5);
    CHECK(lim.relative_gap() < 1e-4);
    // the guarded value at the root sits between the two sides
    const auto mid = effective_fields(dd, 0.5);
    CHECK(mid.b1 == Approx(0.5 * (lim.left.b1 + lim.right.b1)).epsilon(1e-6));
    CHECK(mid.b2 == Approx(0.5 * (lim.left.b2 + lim.right.b2)).epsilon(1e-6));
  }
  // direct values just outside the guard window stay close at the default field
  const auto l = effective_fields(d, 0.5 - 1e-6);
  const auto r = effective_fields(d, 0.5 + 1e-6);
  CHECK(std::abs(l.b1 - r.b1) < 1e-4 * std::abs(l.b1));
  CHECK(std::abs(l.b2 - r.b2) < 1e-4 * std::abs(l.b2));
}

TEST_CASE("fields vanish at the poles") {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  const auto a = effective_fields(d, 0.0);
  const auto b = effective_fields(d, 1.0);
  CHECK(a.b1 == 0.0);
  CHECK(a.b2 == 0.0);
  CHECK(b.b1 == 0.0);
  CHECK(b.b2 == 0.0);
  // continuous approach from inside: B1 ~ t^2, B2 ~ t
  const auto c = effective_fields(d, 1e-4);
  const auto e = effective_fields(d, 1e-5);
  CHECK(std::abs(e.b1) < 0.02 * std::abs(c.b1));
  CHECK(std::abs(e.b2) < 0.2 * std::abs(c.b2));
  CHECK(std::abs(c.b2) < 1e-4);
  CHECK_THROWS_AS(effective_fields(d, 1.1), std::invalid_argument);
}

TEST_CASE("field map") {
  const auto none = fields_xyz(0.0, 0.0, 0.15, kMat);
  CHECK(none.x == 0.0);
  CHECK(none.y == 0.0);
  CHECK(none.z == 0.15);

  const MaterialParams two(2e-6, 1e-6, -0.44);  // alpha/beta = 2
  const auto f = fields_xyz(0.1, 0.0, 0.15, two);
  CHECK(f.y == Approx(0.2));
  CHECK(f.z == Approx(0.25));

  const auto g = fields_xyz(0.1, 0.3, 0.15, two.with_xi(0.1, 0.2));
  CHECK(g.y == Approx(1.1 * 0.2));
  CHECK(g.z - 0.15 == Approx(1.1 * 0.1));
  CHECK(g.x == Approx(1.2 * 0.3));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto mat = kMat.with_xi(0.07, 0.03);
  for (int i = 0; i < 100; ++i) {
    const double a1 = u(rng), a2 = u(rng), c1 = u(rng), c2 = u(rng);
    const auto s = fields_xyz(a1 + c1, a2 + c2, 0.0, mat);
    const auto p = fields_xyz(a1, a2, 0.0, mat);
    const auto q = fields_xyz(c1, c2, 0.0, mat);
    CHECK(std::abs(s.x - p.x - q.x) <= 1e-12 * (std::abs(s.x) + 1e-300) + 1e-15);
    CHECK(std::abs(s.y - p.y - q.y) <= 1e-12 * std::abs(s.y) + 1e-15);
    CHECK(std::abs(s.z - p.z - q.z) <= 1e-12 * std::abs(s.z) + 1e-15);
  }
}

TEST_CASE("electric fields") {
  const auto smooth = TrajectoryDesign::make(1.0, 0.15, kMat);
  const auto peaked = TrajectoryDesign::make(1.0, 1.05, kMat);
  double max_smooth = 0.0, max_peaked = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const auto a = electric_fields(smooth, t);
    const auto b = electric_fields(peaked, t);
    REQUIRE(std::isfinite(a.ex));
    REQUIRE(std::isfinite(a.ey));
    max_smooth = std::max({max_smooth, std::abs(a.ex), std::abs(a.ey)});
    max_peaked = std::max({max_peaked, std::abs(b.ex), std::abs(b.ey)});
  }
  CHECK(max_smooth > 0.0);
  CHECK(max_peaked > 5.0 * max_smooth);

  SUBCASE("Ex integrates to the change of B1") {
    const double t1 = 0.3;
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      sum += w * electric_fields(smooth, t1 * i / n).ex;
    }
    sum *= t1 / n;
    const double conv =
        kMat.g() * PhysicalConstants::mu_B / (2.0 * kMat.beta()) * PhysicalConstants::volt_conv;
    const double expect =
        conv * (effective_fields(smooth, t1).b1 - effective_fields(smooth, 0.0).b1);
    CHECK(sum == Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("sampled field table") {
  const auto d = TrajectoryDesign::make(1.0, 0.15, kMat);
  const auto rows = sample_fields(d, 1001);
  REQUIRE(rows.size() == 1001);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.back().t == 1.0);
  CHECK(rows[500].t == Approx(0.5));
  for (const auto& r : rows) {
    CHECK(std::isfinite(r.b1));
    CHECK(std::isfinite(r.ex));
  }
  CHECK_THROWS_AS(sample_fields(d, 1), std::invalid_argument);
}

TEST_CASE("singularity detection") {
  SUBCASE("single removable root") {
    for (double b0 : {0.15, 1.05}) {
      const auto d = TrajectoryDesign::make(1.0, b0, kMat);
      const auto rep = detect_singularities(d, 1001);
      REQUIRE(rep.count() == 1);
      CHECK(rep.times[0] == Approx(0.5).epsilon(1e-9));
      CHECK(rep.all_cancellable());
      CHECK(rep.numerator_residuals[0] < cancellation_tolerance(d, rep.times[0]));
      CHECK(std::abs(singularity_function(d, rep.times[0])) < 1e-10 * kMat.alpha());
    }
  }
  SUBCASE("extra roots above the limit") {
    for (double b0 : {2.0, 5.0}) {
      const auto d = TrajectoryDesign::make(1.0, b0, kMat);
      const auto rep = detect_singularities(d, 1001);
      CHECK(rep.count() > 1);
      CHECK_FALSE(rep.all_cancellable());
      const bool has_mid = std::any_of(rep.times.begin(), rep.times.end(),
                                       [](double t) { return std::abs(t - 0.5) < 1e-9; });
      CHECK(has_mid);
      for (std::size_t i = 0; i < rep.count(); ++i) {
        if (!rep.cancellable[i]) {
          CHECK_THROWS_AS(effective_fields(d, rep.times[i]), SingularityError);
        }
      }
    }
  }
  SUBCASE("singularity error carries time and residual") {
    const auto d = TrajectoryDesign::make(1.0, 5.0, kMat);
    const auto rep = detect_singularities(d, 1001);
    for (std::size_t i = 0; i < rep.count(); ++i) {
      if (rep.cancellable[i]) continue;
      try {
        effective_fields(d, rep.times[i]);
        FAIL("expected a singularity error");
      } catch (const SingularityError& e) {
        CHECK(e.time() == Approx(rep.times[i]).epsilon(1e-6));
        CHECK(e.residual() > 0.0);
      }
      break;
    }
  }
  CHECK_THROWS_AS(detect_singularities(TrajectoryDesign::make(1.0, 0.15, kMat), 10),
                  std::invalid_argument);
}

TEST_CASE("numerator cancellation") {
  const double tf = 1.0;
  const auto theta = solve_theta(tf);
  const double mid = kMat.beta_over_alpha() * theta.derivative(0.5) - kMat.eta() * 0.15;

  const TrajectoryDesign good(theta, solve_phi_boundary(tf, mid), 0.15, kMat);
  CHECK(verify_cancellation(good, 0.5) < cancellation_tolerance(good, 0.5));

  // a wrong midpoint slope leaves the B2 numerator at alpha * 1 rad/ns
  const TrajectoryDesign bad(theta, solve_phi_boundary(tf, mid + 1.0), 0.15, kMat);
  CHECK(verify_cancellation(bad, 0.5) == Approx(kMat.alpha()).epsilon(1e-9));
  CHECK(verify_cancellation(bad, 0.5) > cancellation_tolerance(bad, 0.5));
  CHECK_THROWS_AS(effective_fields(bad, 0.5), SingularityError);

  // beta/alpha -> 0: the condition reduces to phi_dot + eta B0 = 0
  const MaterialParams weak(2e-6, 2e-14, -0.44);
  const auto d = TrajectoryDesign::make(tf, 0.15, weak);
  const auto a = eval_angles(d, 0.5);
  CHECK(std::abs(a.phi_dot + weak.eta() * 0.15) < 1e-6);
}

TEST_CASE("B0 upper limit") {
  const double at1 = compute_b0_max(1.0, kMat, 20.0);
  CHECK(at1 > 1.05);
  CHECK(at1 == Approx(1.1587).epsilon(1e-3));
  CHECK(compute_b0_max(0.5, kMat, 40.0) > at1);

  double prev = 1e300;
  for (int i = 0; i < 10; ++i) {
    const double tf = 0.2 + 1.8 * i / 9.0;
    const double b = compute_b0_max(tf, kMat, 20.0 / tf);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(std::abs(compute_b0_max(1.0, kMat, 20.0, 4001) - at1) < 2e-3);
  CHECK_THROWS_AS(compute_b0_max(1.0, kMat, 1.0), std::invalid_argument);
}
