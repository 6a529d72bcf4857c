#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"
#include "spinflip/field_synthesis.hpp"
#include "spinflip/open_systems.hpp"

using namespace spinflip;
using doctest::Approx;

namespace {

const MaterialParams kMat = MaterialParams::gaas_default();

TrajectoryDesign design(double tf = 1.0) { return TrajectoryDesign::make(tf, 0.15, kMat); }

}  // namespace

TEST_CASE("Lindblad right-hand side") {
  const auto h = ComplexMatrix2::hermitian(0.01, cplx(0.002, -0.003), -0.01);
  const auto rho = DensityMatrix::from_bloch({0.3, -0.2, 0.5}).matrix();

  const auto d = lindblad_rhs(rho, h, 0.7);
  CHECK(std::abs(d.trace()) < 1e-15);

  const auto mixed = DensityMatrix::maximally_mixed().matrix();
  CHECK(lindblad_rhs(mixed, h, 0.7).frobenius_norm() < 1e-15);

  // H = 0: r' = -4 gamma r
  const auto pure_decay = to_bloch(lindblad_rhs(rho, ComplexMatrix2::zero(), 0.25));
  CHECK(pure_decay.u == Approx(-4.0 * 0.25 * 0.3));
  CHECK(pure_decay.v == Approx(-4.0 * 0.25 * -0.2));
  CHECK(pure_decay.w == Approx(-4.0 * 0.25 * 0.5));
}

TEST_CASE("Bloch right-hand side") {
  const BlochVector r{0.3, -0.4, 0.5};
  const double b0 = 0.15;
  const auto d = bloch_rhs(r, {0.0, 0.0, b0}, 0.0, kMat);
  const double eta = kMat.eta();
  CHECK(d.u == Approx(eta * b0 * r.v));
  CHECK(d.v == Approx(-eta * b0 * r.u));
  CHECK(d.w == 0.0);

  const auto decay = bloch_rhs(r, {0.0, 0.0, 0.0}, 0.1, kMat);
  CHECK(decay.u == Approx(-0.4 * r.u));

  // the Bloch map agrees with the density-matrix form term by term
  const FieldTriple f{0.03, -0.02, 0.17};
  const auto rho = DensityMatrix::from_bloch(r).matrix();
  const auto via_rho = to_bloch(lindblad_rhs(rho, build_heff(f, kMat), 0.2));
  CHECK(max_abs_diff(via_rho, bloch_rhs(r, f, 0.2, kMat)) < 1e-12);
}

TEST_CASE("noise right-hand sides") {
  const FieldTriple f{0.03, -0.02, 0.17};
  const double b0 = 0.15;
  const double lambda = 0.3;
  const BlochVector r{0.3, -0.4, 0.5};
  const auto rho = DensityMatrix::from_bloch(r).matrix();
  const auto h = build_heff(f, kMat);

  SUBCASE("lambda = 0") {
    const auto ops = noise_operators(f, b0, kMat, NoiseChannel::as_printed);
    CHECK((noise_master_rhs(rho, h, ops, 0.0) - lindblad_rhs(rho, h, 0.0)).frobenius_norm() == 0.0);
    CHECK(max_abs_diff(noise_bloch_rhs(r, f, b0, 0.0, kMat), bloch_rhs(r, f, 0.0, kMat)) == 0.0);
  }
  SUBCASE("identity noise operator") {
    const auto d = noise_master_rhs(rho, h, ComplexMatrix2::identity() * 0.01, lambda);
    CHECK((d - lindblad_rhs(rho, h, 0.0)).frobenius_norm() < 1e-18);
  }
  SUBCASE("no drive, no decay") {
    const FieldTriple idle{0.0, 0.0, b0};
    const auto d = noise_bloch_rhs(r, idle, b0, lambda, kMat);
    CHECK(max_abs_diff(d, bloch_rhs(r, idle, 0.0, kMat)) == 0.0);
  }
  SUBCASE("as-printed operators reproduce the printed matrix") {
    const auto ops = noise_operators(f, b0, kMat, NoiseChannel::as_printed);
    CHECK(ops.size() == 3);
    const auto via_rho = to_bloch(noise_master_rhs(rho, h, ops, lambda));
    const auto printed = noise_bloch_rhs(r, f, b0, lambda, kMat, NoiseChannel::as_printed);
    CHECK(max_abs_diff(via_rho, printed) < 1e-10 * printed.norm());

    const double k = 0.5 * lambda * lambda * kMat.eta() * kMat.eta();
    const double zp = f.z - b0;
    const auto decay = noise_bloch_rhs({1.0, 0.0, 0.0}, f, b0, lambda, kMat) -
                       bloch_rhs({1.0, 0.0, 0.0}, f, 0.0, kMat);
    CHECK(decay.u == Approx(-k * (f.y * f.y + zp * zp)));
    CHECK(decay.v == 0.0);
    CHECK(decay.w == 0.0);
  }
  SUBCASE("x-only operator keeps the cross terms") {
    const auto ops = noise_operators(f, b0, kMat, NoiseChannel::x_only);
    CHECK(ops.size() == 1);
    const auto via_rho = to_bloch(noise_master_rhs(rho, h, ops, lambda));
    const auto bloch = noise_bloch_rhs(r, f, b0, lambda, kMat, NoiseChannel::x_only);
    CHECK(max_abs_diff(via_rho, bloch) < 1e-10 * bloch.norm());

    const double k = 0.5 * lambda * lambda * kMat.eta() * kMat.eta();
    const double zp = f.z - b0;
    const auto du = noise_bloch_rhs({1.0, 0.0, 0.0}, f, b0, lambda, kMat, NoiseChannel::x_only) -
                    bloch_rhs({1.0, 0.0, 0.0}, f, 0.0, kMat);
    CHECK(du.u == Approx(-k * (f.y * f.y + zp * zp)));
    const auto dv = noise_bloch_rhs({0.0, 1.0, 0.0}, f, b0, lambda, kMat, NoiseChannel::x_only) -
                    bloch_rhs({0.0, 1.0, 0.0}, f, 0.0, kMat);
    CHECK(dv.w == Approx(k * f.y * zp));  // off-diagonal coupling absent from the as-printed form
  }
}

TEST_CASE("noise channel names") {
  CHECK(parse_noise_channel("as-printed") == NoiseChannel::as_printed);
  CHECK(parse_noise_channel("x-only") == NoiseChannel::x_only);
  CHECK(to_string(NoiseChannel::x_only) == "x-only");
  CHECK_THROWS_AS(parse_noise_channel("x"), std::invalid_argument);
  CHECK(noise_lambda(0.2, 4.0) == Approx(0.4));
}

TEST_CASE("density and Bloch propagation agree and stay physical") {
  const std::array<OpenSystemParams, 4> cases{{{0.0, 0.0, NoiseChannel::as_printed},
                                               {0.05, 0.0, NoiseChannel::as_printed},
                                               {0.0, 0.2, NoiseChannel::as_printed},
                                               {0.02, 0.2, NoiseChannel::x_only}}};
  for (double tf : {0.1, 1.0}) {
    const auto d = design(tf);
    for (const auto& p : cases) {
      const auto rho = propagate_density(d, p, DensityMatrix::from_state(SpinState::spin_up()),
                                         4000, 40);
      const auto bloch = propagate_bloch(d, p, {0.0, 0.0, 1.0}, 4000, 40);
      REQUIRE(rho.states.size() == bloch.states.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < rho.states.size(); ++i) {
        worst = std::max(worst, max_abs_diff(to_bloch(rho.states[i]), bloch.states[i]));
      }
      CHECK(worst < 1e-8);
      CHECK(rho.max_trace_error < 1e-9);
      CHECK(rho.min_eigenvalue > -1e-9);
      CHECK(rho.max_purity_increase < 1e-9);
      CHECK(rho.max_hermiticity_defect < 1e-12);
    }
  }
}

TEST_CASE("dephasing fidelity") {
  CHECK(propagate_master(design(), 0.0, 10000).fidelity >= 1.0 - 1e-6);

  const auto r = propagate_master(design(), 0.01, 10000);
  CHECK(r.fidelity >= 0.98);
  CHECK(std::abs(r.fidelity - 0.98) <= 1e-2);
  CHECK(r.amplitude_fidelity == Approx(std::sqrt(r.fidelity)));

  for (double tf : {0.1, 1.0}) {
    for (double gt : {0.01, 0.03, 0.05}) {
      const double gamma = gt / tf;
      const double f = propagate_master(design(tf), gamma, 10000).fidelity;
      CHECK(f >= perturbative_bound(gamma, tf) - 1e-3);
      CHECK(std::abs(f - perturbative_bound(gamma, tf)) <= 1e-2);
      // exact dephasing of a pole-to-pole flip
      CHECK(f == Approx(0.5 * (1.0 + std::exp(-4.0 * gamma * tf))).epsilon(1e-6));
    }
  }

  double prev_short = 2.0, prev_long = 2.0;
  for (int i = 0; i < 20; ++i) {
    const double gamma = i / 19.0;
    const double fs = propagate_master(design(0.1), gamma, 10000).fidelity;
    const double fl = propagate_master(design(1.0), gamma, 10000).fidelity;
    CHECK(fs <= prev_short);
    CHECK(fl <= prev_long);
    if (gamma > 0.0) CHECK(fs > fl);
    prev_short = fs;
    prev_long = fl;
  }
  CHECK_THROWS_AS(propagate_master(design(), -0.1, 10000), std::invalid_argument);
  CHECK_THROWS_AS(propagate_master(design(), 0.1, 10), std::invalid_argument);
}

TEST_CASE("noise fidelity decreases with the noise strength") {
  for (auto ch : {NoiseChannel::as_printed, NoiseChannel::x_only}) {
    for (double tf : {0.1, 1.0}) {
      double prev = 2.0;
      for (double l2 : {0.0, 0.01, 0.02, 0.05, 0.1}) {
        const double f = propagate_open(design(tf), {0.0, std::sqrt(l2), ch}, 10000).fidelity;
        CHECK(f < prev);
        prev = f;
      }
    }
  }
}

TEST_CASE("perturbative bound") {
  CHECK(perturbative_bound(0.0, 3.0) == 1.0);
  CHECK(perturbative_bound(0.01, 1.0) == Approx(0.98));
  CHECK(perturbative_bound(0.01, 0.1) == Approx(0.998));
  CHECK(perturbative_bound(2.0, 1.0) == 0.0);
}

TEST_CASE("Wiener increments") {
  WienerIncrements dw(1234);
  const double dt = 1e-4;
  const int n = 1000000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = dw(dt);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n;
  // standard errors: sqrt(dt / n) for the mean, sqrt(2 dt^2 / n) for <dW^2>
  CHECK(std::abs(mean) < 3.0 * std::sqrt(dt / n));
  CHECK(std::abs(var - dt) < 3.0 * std::sqrt(2.0 * dt * dt / n));
}

TEST_CASE("stochastic trajectories") {
  const auto d = design();
  SUBCASE("noise off reduces to the closed system") {
    const auto sse = sse_trajectory(d, NoiseParams{0.0, NoiseChannel::as_printed, 1, 1}, 10000);
    const auto ref = propagate_schrodinger(d, SpinState::spin_up(), 10000, 1, false);
    CHECK(distance(sse.final_state(), ref.final_state()) < 1e-10);
  }
  SUBCASE("fixed seed is reproducible") {
    const NoiseParams np{0.3, NoiseChannel::x_only, 99, 1};
    const auto a = sse_trajectory(d, np, 10000, 7, 100);
    const auto b = sse_trajectory(d, np, 10000, 7, 100);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      CHECK(a.states[i].up == b.states[i].up);
      CHECK(a.states[i].down == b.states[i].down);
    }
    const auto c = sse_trajectory(d, np, 10000, 8, 100);
    CHECK(distance(a.final_state(), c.final_state()) > 0.0);
    for (const auto& s : a.states) CHECK(std::abs(s.norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(sse_trajectory(d, NoiseParams{}, 100), std::invalid_argument);
}

TEST_CASE("ensemble averages") {
  const auto d = design();
  SUBCASE("noise off has zero variance") {
    const auto e = ensemble_average(d, {0.0, NoiseChannel::as_printed, 3, 100}, 10000, 1, 1000);
    CHECK(e.standard_error < 1e-12);
    CHECK(e.fidelity > 1.0 - 1e-6);
    CHECK(e.n_traj == 100);
    CHECK(e.times.size() == e.mean.size());
  }
  SUBCASE("standard error shrinks as 1/sqrt(n)") {
    std::array<double, 3> se{};
    std::array<std::size_t, 3> ns{100, 400, 1600};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      se[i] = ensemble_average(d, {0.3, NoiseChannel::x_only, 11, ns[i]}, 10000, 0, 10000)
                  .standard_error;
    }
    // each quadrupling should halve the error; allow sampling scatter
    CHECK(se[0] / se[1] == Approx(2.0).epsilon(0.25));
    CHECK(se[1] / se[2] == Approx(2.0).epsilon(0.25));
  }
  SUBCASE("worker count does not change the result") {
    const NoiseParams np{0.3, NoiseChannel::as_printed, 5, 100};
    const auto a = ensemble_average(d, np, 10000, 1, 1000);
    const auto b = ensemble_average(d, np, 10000, 3, 1000);
    CHECK(a.fidelity == b.fidelity);
    CHECK(a.standard_error == b.standard_error);
    CHECK(max_abs_diff(a.mean.back(), b.mean.back()) == 0.0);
  }
  CHECK_THROWS_AS(ensemble_average(d, {0.1, NoiseChannel::as_printed, 1, 10}, 10000),
                  std::invalid_argument);
}
