// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/twobody_cv.hpp"

#include <cmath>

namespace divisio {

namespace {

double offdiag_max(const RealMatrix& m) {
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

}  // namespace

RealMatrix symplectic_form(Index n) {
  RealMatrix j = RealMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = RealMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return j;
}

CanonicalTransform::CanonicalTransform(RealMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0)
    throw std::invalid_argument("CanonicalTransform: matrix must be square of even order");
  const Index n = matrix_.rows() / 2;
  const RealMatrix j = symplectic_form(n);
  const double scale = 1.0 + matrix_.cwiseAbs().maxCoeff();
  const double defect = (matrix_.transpose() * j * matrix_ - j).cwiseAbs().maxCoeff();
  if (defect > tol::kSymplectic * scale * scale)
    throw std::invalid_argument("CanonicalTransform: matrix is not symplectic within tolerance");
}

void check_system(const TwoBodySystem& sys) {
  if (sys.m1 <= 0.0 || sys.m2 <= 0.0)
    throw std::invalid_argument("TwoBodySystem: masses must be strictly positive");
  if (const auto* quad = std::get_if<QuadraticPotential>(&sys.potential)) {
    if (std::abs(quad->k(0, 1) - quad->k(1, 0)) > 1e-12 * (1.0 + quad->k.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("TwoBodySystem: quadratic potential matrix must be symmetric");
  }
}

CanonicalTransform cm_relative_transform(double m1, double m2) {
  if (m1 <= 0.0 || m2 <= 0.0)
    throw std::invalid_argument("cm_relative_transform: masses must be strictly positive");
  const double total = m1 + m2;
  RealMatrix s = RealMatrix::Zero(4, 4);
  // Position block.
  s(0, 0) = m1 / total;
  s(0, 1) = m2 / total;
  s(1, 0) = 1.0;
  s(1, 1) = -1.0;
  // Momentum block.
  s(2, 2) = 1.0;
  s(2, 3) = 1.0;
  s(3, 2) = m2 / total;
  s(3, 3) = -m1 / total;
  return CanonicalTransform(std::move(s));
}

DecouplingCheck kinetic_decoupling_check(const TwoBodySystem& sys, const CanonicalTransform& t) {
  check_system(sys);
  if (t.pairs() != 2)
    throw std::invalid_argument("kinetic_decoupling_check: transform must act on two pairs");

  // Old coordinates in terms of new ones, via the exact symplectic inverse.
  const RealMatrix j = symplectic_form(2);
  const RealMatrix inv = -j * t.matrix().transpose() * j;
  const RealMatrix x_from_xnew = inv.topLeftCorner(2, 2);
  const RealMatrix x_from_pnew = inv.topRightCorner(2, 2);
  const RealMatrix p_from_pnew = inv.bottomRightCorner(2, 2);

  DecouplingCheck check;
  RealMatrix inv_mass = RealMatrix::Zero(2, 2);
  inv_mass(0, 0) = 1.0 / sys.m1;
  inv_mass(1, 1) = 1.0 / sys.m2;
  check.kinetic_cross = offdiag_max(p_from_pnew.transpose() * inv_mass * p_from_pnew);

  if (std::holds_alternative<RelativePotential>(sys.potential)) {
    // Weights of x1 - x2 over the new coordinates (positions, then momenta).
    Eigen::RowVector2d diff(1.0, -1.0);
    Eigen::RowVector4d w;
    w << diff * x_from_xnew, diff * x_from_pnew;
    double largest = 0.0, second = 0.0;
    int significant = 0;
    const double floor = 1e-12 * (1.0 + w.cwiseAbs().maxCoeff());
    for (int k = 0; k < 4; ++k) {
      const double mag = std::abs(w(k));
      if (mag > floor) ++significant;
      if (mag > largest) {
        second = largest;
        largest = mag;
      } else if (mag > second) {
        second = mag;
      }
    }
    check.potential_cross = second;
    check.potential_single_coordinate = (significant == 1);
  } else {
    const auto& quad = std::get<QuadraticPotential>(sys.potential);
    check.potential_cross = offdiag_max(x_from_xnew.transpose() * quad.k * x_from_xnew);
  }
  return check;
}

DecoupledForm decouple_quadratic(const TwoBodySystem& sys) {
  check_system(sys);
  const auto* quad = std::get_if<QuadraticPotential>(&sys.potential);
  if (quad == nullptr)
    throw std::invalid_argument("decouple_quadratic: system must carry a quadratic potential");

  Eigen::Matrix2d sqrt_mass = Eigen::Matrix2d::Zero();
  sqrt_mass(0, 0) = std::sqrt(sys.m1);
  sqrt_mass(1, 1) = std::sqrt(sys.m2);
  const Eigen::Matrix2d inv_sqrt_mass = sqrt_mass.inverse();

  const Eigen::Matrix2d weighted = inv_sqrt_mass * quad->k * inv_sqrt_mass;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(weighted);
  const Eigen::Matrix2d modes = es.eigenvectors();

  RealMatrix s = RealMatrix::Zero(4, 4);
  s.topLeftCorner(2, 2) = modes.transpose() * sqrt_mass;
  s.bottomRightCorner(2, 2) = modes.transpose() * inv_sqrt_mass;

  DecoupledForm form{CanonicalTransform(std::move(s)), sys.m1 + sys.m2,
                     sys.m1 * sys.m2 / (sys.m1 + sys.m2), RealVector(2), false, 0.0};
  const double freq_floor = 1e-12 * (1.0 + std::abs(es.eigenvalues().cwiseAbs().maxCoeff()));
  for (Index k = 0; k < 2; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -freq_floor) form.has_imaginary_modes = true;
    form.mode_frequencies(k) = std::sqrt(std::max(lambda, 0.0));
  }
  form.cross_coupling_residual = kinetic_decoupling_check(sys, form.transform).residual();
  return form;
}

CanonicalTransform compose(const CanonicalTransform& t1, const CanonicalTransform& t2) {
  if (t1.pairs() != t2.pairs())
    throw std::invalid_argument("compose: transforms act on different phase spaces");
  return CanonicalTransform(t1.matrix() * t2.matrix());
}

CanonicalTransform invert(const CanonicalTransform& t) {
  const RealMatrix j = symplectic_form(t.pairs());
  return CanonicalTransform(-j * t.matrix().transpose() * j);
}

}  // namespace divisio
