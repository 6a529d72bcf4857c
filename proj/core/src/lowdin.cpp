#include "spinflip/lowdin.hpp"

#include <cmath>
#include <stdexcept>

#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"

namespace spinflip {

namespace {

constexpr cplx I{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Spin block of one orbital level: E +- Delta_z/2 plus the drive terms.
ComplexMatrix2 spin_block(double e, const FourLevelModel& m) {
  const double ax = m.eax();
  const double ay = m.eay();
  const double a = m.mat.alpha();
  const double b = m.mat.beta();
  ComplexMatrix2 out;
  out.a = {cplx(e + 0.5 * m.delta_z - b * ax), -a * (I * ax + ay), a * (I * ax - ay),
           cplx(e - 0.5 * m.delta_z + b * ax)};
  return out;
}

}  // namespace

void FourLevelModel::validate() const {
  if (!std::isfinite(e1) || !std::isfinite(e2) || !std::isfinite(delta_z) ||
      !std::isfinite(m) || !std::isfinite(drive_b1) || !std::isfinite(drive_b2) ||
      !finite(pbar_x) || !finite(pbar_y)) {
    throw std::invalid_argument("four-level model: non-finite parameter");
  }
  if (!(e2 > e1)) throw std::invalid_argument("four-level model: need e2 > e1");
  if (!(m > 0.0)) throw std::invalid_argument("four-level model: need m > 0");
}

double FourLevelModel::eax() const {
  return -mat.g() * PhysicalConstants::mu_B * drive_b1 / (2.0 * mat.beta());
}

double FourLevelModel::eay() const {
  return -mat.g() * PhysicalConstants::mu_B * drive_b2 / (2.0 * mat.alpha());
}

Matrix4c BlockPartition::reassemble() const {
  Matrix4c h;
  for (int r = 0; r < 2; ++r) {
    for (int c2 = 0; c2 < 2; ++c2) {
      h(r, c2) = q(r, c2);
      h(r, c2 + 2) = c(r, c2);
      h(r + 2, c2) = std::conj(c(c2, r));
      h(r + 2, c2 + 2) = b(r, c2);
    }
  }
  return h;
}

Matrix4c build_full_hamiltonian(const FourLevelModel& model) {
  model.validate();
  const double a = model.mat.alpha();
  const double b = model.mat.beta();
  const double tx = model.atilde_x();
  const double ty = model.atilde_y();
  const cplx px = model.pbar_x;
  const cplx py = model.pbar_y;

  BlockPartition p;
  p.q = spin_block(model.e1, model);
  p.b = spin_block(model.e2, model);
  p.c.a = {(b - tx) * px - ty * py, a * (I * px + py), a * (-I * px + py),
           -(b + tx) * px - ty * py};
  return p.reassemble();
}

BlockPartition partition(const Matrix4c& h4) {
  BlockPartition p;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      p.q.a[2 * r + c] = h4(r, c);
      p.c.a[2 * r + c] = h4(r, c + 2);
      p.b.a[2 * r + c] = h4(r + 2, c + 2);
    }
  }
  return p;
}

ComplexMatrix2 lowdin_reduce(const BlockPartition& p, double e_ref) {
  const auto shifted = ComplexMatrix2::identity() * e_ref - p.b;
  const double cond = condition_number(shifted);
  if (!(cond < 1e12)) {
    throw DegenerateReferenceError("reference energy " + std::to_string(e_ref) +
                                   " meV is an eigenvalue of the eliminated block");
  }
  return p.q + p.c * inverse(shifted) * p.c.adjoint();
}

std::array<double, 2> lowdin_self_consistent(const BlockPartition& p, double e_ref0,
                                             std::size_t iterations) {
  std::array<double, 2> out{};
  for (int k = 0; k < 2; ++k) {
    double e = e_ref0;
    for (std::size_t i = 0; i < iterations; ++i) {
      const auto ev = hermitian_eigenvalues(lowdin_reduce(p, e));
      e = k == 0 ? ev.first : ev.second;
    }
    out[static_cast<std::size_t>(k)] = e;
  }
  return out;
}

std::array<double, 4> full_spectrum(const Matrix4c& h4) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h4, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

XiFactors xi_factors(const FourLevelModel& model) {
  model.validate();
  const double denom = model.m * model.gap();
  return {2.0 * std::norm(model.pbar_x) / denom, 2.0 * std::norm(model.pbar_y) / denom};
}

ValidityReport validity_check(const FourLevelModel& model) {
  model.validate();
  ValidityReport r;
  r.drive_ratio = std::max(std::abs(model.atilde_x() * model.pbar_x),
                           std::abs(model.atilde_y() * model.pbar_y)) /
                  model.gap();
  r.drive_ok = r.drive_ratio <= 0.1;
  return r;
}

double orbital_adiabaticity(double tf, double gap) {
  if (!(tf > 0.0) || !(gap > 0.0)) {
    throw std::invalid_argument("orbital_adiabaticity: tf and gap must be positive");
  }
  return PhysicalConstants::hbar / (tf * gap);
}

ComplexMatrix2 first_order_closed_form(const FourLevelModel& model) {
  model.validate();
  const double a = model.mat.alpha();
  const double b = model.mat.beta();
  const double ax = model.eax();
  const double ay = model.eay();
  const cplx proj = model.atilde_x() * model.pbar_x + model.atilde_y() * model.pbar_y;
  const double gap = model.gap();

  const cplx h0_11 = model.delta_z - b * ax;
  const cplx h0_12 = -a * (I * ax + ay);
  const cplx h_11 = -2.0 * b * model.pbar_x * proj / gap;
  const cplx h_12 = -2.0 * a * proj * (I * model.pbar_x + model.pbar_y) / gap;

  ComplexMatrix2 out;
  out.a = {model.e1 + h0_11 + h_11, h0_12 + h_12, std::conj(h0_12 + h_12),
           model.e1 - h0_11 - h_11};
  return out;
}

}  // namespace spinflip
