// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <variant>

#include "divisio/operator_core.hpp"

/**
 * @file twobody_cv.hpp
 * @brief Linear symplectic transforms on phase space and exact decoupling of
 *        two-body systems: center-of-mass/relative coordinates and normal
 *        modes of quadratic potentials.
 *
 * Phase-space coordinates are ordered (x_1..x_n, p_1..p_n) with hbar = 1, so
 * preserving canonical commutators is exactly preservation of the standard
 * symplectic form J under congruence.
 */

namespace divisio {

/// Standard symplectic form on n coordinate pairs: [[0, I], [-I, 0]].
RealMatrix symplectic_form(Index n);

/// A real linear symplectic map acting on (x, p) coordinate vectors.
class CanonicalTransform {
 public:
  /// Validates S^T J S = J within tolerance; throws otherwise.
  explicit CanonicalTransform(RealMatrix matrix);

  const RealMatrix& matrix() const { return matrix_; }
  Index pairs() const { return matrix_.rows() / 2; }

 private:
  RealMatrix matrix_;
};

/// Potential depending only on |x1 - x2|, tracked symbolically (the Coulomb
/// case); never evaluated numerically.
struct RelativePotential {};

/// V = (1/2) x^T K x with symmetric K.
struct QuadraticPotential {
  Eigen::Matrix2d k;
};

struct TwoBodySystem {
  double m1 = 1.0;
  double m2 = 1.0;
  std::variant<RelativePotential, QuadraticPotential> potential;
};

/// Throws unless masses are positive and a quadratic K is symmetric.
void check_system(const TwoBodySystem& sys);

/// Coupling content of a two-body Hamiltonian after a coordinate change.
struct DecouplingCheck {
  double kinetic_cross = 0.0;    // off-diagonal of the transformed inverse-mass form
  double potential_cross = 0.0;  // quadratic: off-diagonal of transformed K;
                                 // relative: leakage beyond one new coordinate
  std::optional<bool> potential_single_coordinate;  // relative potentials only

  double residual() const { return std::max(kinetic_cross, potential_cross); }
};

struct DecoupledForm {
  CanonicalTransform transform;
  double total_mass;
  double reduced_mass;
  RealVector mode_frequencies;  // quadratic case; empty otherwise
  bool has_imaginary_modes = false;
  double cross_coupling_residual = 0.0;
};

/**
 * Center-of-mass/relative point transform:
 *   X_cm = (m1 x1 + m2 x2)/M,  x_r = x1 - x2,
 *   P_cm = p1 + p2,            p_r = (m2 p1 - m1 p2)/M.
 * Decouples the kinetic form exactly into P_cm^2/2M + p_r^2/2mu.
 */
CanonicalTransform cm_relative_transform(double m1, double m2);

/// Cross-coupling left in the kinetic and potential terms after applying the
/// transform to the system's coordinates.
DecouplingCheck kinetic_decoupling_check(const TwoBodySystem& sys, const CanonicalTransform& t);

/// Normal-mode decoupling of a quadratic two-body system via mass weighting
/// and orthogonal diagonalization. Negative stiffness eigenvalues are
/// flagged as imaginary modes.
DecoupledForm decouple_quadratic(const TwoBodySystem& sys);

/// Composition t1 after t2 (matrix product), and the exact symplectic
/// inverse -J S^T J.
CanonicalTransform compose(const CanonicalTransform& t1, const CanonicalTransform& t2);
CanonicalTransform invert(const CanonicalTransform& t);

}  // namespace divisio
