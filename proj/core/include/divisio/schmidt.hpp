// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "divisio/operator_core.hpp"

/**
 * @file schmidt.hpp
 * @brief Canonical decomposition of a bipartite Hermitian operator into a
 *        sum of tensor products of Hilbert-Schmidt-orthonormal Hermitian
 *        local factors.
 *
 * The decomposition is computed in the real vector space of Hermitian
 * matrices: the operator's coordinates in a product of orthonormal Hermitian
 * operator bases form a real rectangular matrix whose SVD delivers positive
 * coefficients and Hermitian factor pairs. Working over the reals (rather
 * than complex realignment) is what guarantees Hermitian factors.
 */

namespace divisio {

/**
 * Sparse description of one element of the orthonormal Hermitian basis of
 * n x n matrices: the n diagonal units E_ii, then for each i<j the pair
 * (E_ij + E_ji)/sqrt(2) and i(E_ij - E_ji)/sqrt(2).
 */
struct HermitianBasisElement {
  Index row, col;  // row <= col
  enum class Kind { Diagonal, SymmetricOffdiag, AntisymmetricOffdiag } kind;
};

/// Enumeration of the orthonormal Hermitian basis of n x n matrices
/// (diagonals first, then off-diagonal pairs in row-major order).
std::vector<HermitianBasisElement> hermitian_basis(Index n);

/// Dense matrix of one basis element.
Matrix hermitian_basis_matrix(Index n, const HermitianBasisElement& e);

struct OperatorSchmidtDecomposition {
  RealVector coefficients;        // strictly positive, descending
  std::vector<Matrix> factors_a;  // Hermitian dim_a x dim_a, HS-orthonormal
  std::vector<Matrix> factors_b;  // Hermitian dim_b x dim_b, HS-orthonormal
  Index schmidt_rank = 0;         // number of retained coefficients

  /// Sum of coefficient-weighted tensor products.
  Matrix reconstruct() const;
};

/**
 * Real (dim_a^2 x dim_b^2) matrix of the operator's coordinates in the
 * product of orthonormal Hermitian bases of the two factors. Its singular
 * values are the Schmidt coefficients.
 */
RealMatrix realign(const CompositeOperator& op);

/**
 * Canonical minimal decomposition of a bipartite Hermitian operator.
 *
 * Coefficients below kRankCut * sigma_max are discarded. Each retained term
 * has its joint sign fixed so the first significant entry of the A-side
 * factor is positive, and terms inside a degenerate coefficient block are
 * ordered lexicographically by the A-side factor entries.
 */
OperatorSchmidtDecomposition operator_schmidt(const CompositeOperator& op);

}  // namespace divisio
