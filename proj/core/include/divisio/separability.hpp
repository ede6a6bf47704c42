// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "divisio/schmidt.hpp"

/**
 * @file separability.hpp
 * @brief Separability of bipartite Hermitian operators, tested three ways.
 *
 * An operator is separable when it is diagonalizable in a product of local
 * orthonormal bases. Three equivalent formulations are implemented and
 * cross-validated against each other:
 *
 *   (A) spectral form: a real coefficient array a_ij over rank-1 product
 *       projectors reconstructs the operator;
 *   (B) two local bases exist in which every off-diagonal product-basis
 *       matrix element vanishes;
 *   (C) the A-side canonical Schmidt factors pairwise commute, and likewise
 *       the B-side factors.
 *
 * Disagreement between the three verdicts beyond tolerance signals a
 * numerical-degeneracy pathology and raises EquivalenceViolation rather than
 * silently preferring one condition.
 */

namespace divisio {

/// The three raw condition verdicts, attached to EquivalenceViolation for
/// diagnosis.
struct ConditionTriple {
  bool a = false, b = false, c = false;
};

class EquivalenceViolation : public std::runtime_error {
 public:
  EquivalenceViolation(ConditionTriple verdicts, double defect, double offdiag, double recon);
  ConditionTriple verdicts;
  double commutator_defect;
  double offdiag_residual;
  double reconstruction_residual;
};

class NonseparableInteraction : public std::runtime_error {
 public:
  explicit NonseparableInteraction(const std::string& what) : std::runtime_error(what) {}
};

struct ConditionCResult {
  bool commuting = false;
  double defect = 0.0;  // max normalized pairwise commutator norm, either side
};

struct ConditionBResult {
  bool diagonalizable = false;
  Matrix basis_a;           // columns are the candidate A-side basis
  Matrix basis_b;           // columns are the candidate B-side basis
  double offdiag_residual;  // max forbidden element modulus / max element modulus
};

struct ConditionAResult {
  bool spectral = false;
  RealMatrix coefficients;          // a_ij, dim_a x dim_b
  double reconstruction_residual;   // relative HS norm
};

struct SeparabilityVerdict {
  bool separable = false;
  double commutator_defect = 0.0;
  double offdiag_residual = 0.0;
  std::optional<Matrix> local_basis_a;
  std::optional<Matrix> local_basis_b;
  std::optional<RealMatrix> spectral_coefficients;
};

/// Superselection structure of a separable coupling, seen from factor A.
struct PointerStructure {
  std::vector<Matrix> sector_projectors;  // orthogonal, complete, on factor A
  Matrix pointer_observable;              // eigenvalue = sector index
  std::vector<Index> sector_dimensions;
};

/**
 * Common eigenbasis of a family of commuting Hermitian matrices.
 *
 * Eigendecomposes a random generic real combination of the family and
 * recurses into degenerate eigenspaces with fresh combinations, up to
 * max_levels. The returned unitary diagonalizes every family member exactly
 * when the family commutes; for non-commuting input it is a best-effort
 * basis whose residuals expose the failure.
 */
Matrix simultaneous_diagonalization(const std::vector<Matrix>& family, std::mt19937_64& rng,
                                    int max_levels = 3);

/// Condition (C) on the canonical decomposition. Throws on empty input.
ConditionCResult check_condition_c(const OperatorSchmidtDecomposition& dec,
                                   double tol_verdict = tol::kVerdict);

/// Condition (B): attempt local product bases and measure the largest
/// forbidden off-diagonal element.
ConditionBResult check_condition_b(const CompositeOperator& op, std::mt19937_64& rng,
                                   double tol_verdict = tol::kVerdict);

/// Condition (A): read a_ij off the diagonal in the condition-(B) bases and
/// test reconstruction from rank-1 product projectors.
ConditionAResult check_condition_a(const CompositeOperator& op, const ConditionBResult& b,
                                   double tol_verdict = tol::kVerdict);

/**
 * Full separability decision: runs (C), (B), (A) and asserts agreement.
 * Throws EquivalenceViolation when they disagree beyond tolerance.
 */
SeparabilityVerdict is_separable(const CompositeOperator& op, std::uint64_t seed = 0,
                                 double tol_verdict = tol::kVerdict);

/**
 * Sector projectors and pointer observable of a coupling whose A-side
 * canonical factors commute.
 *
 * Basis vectors are coalesced into maximal sectors: two A-side eigenvectors
 * share a sector exactly when their conditional B-side blocks coincide
 * within tolerance. Throws NonseparableInteraction when the A-side factors
 * fail to commute.
 */
PointerStructure extract_pointer_structure(const CompositeOperator& h_int,
                                           std::uint64_t seed = 0,
                                           double tol_verdict = tol::kVerdict);

}  // namespace divisio
