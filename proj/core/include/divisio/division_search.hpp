// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divisio/operator_core.hpp"

/**
 * @file division_search.hpp
 * @brief Search for tensor-product structures in which a Hamiltonian is
 *        additive (interaction-free), and analysis of rival divisions.
 *
 * A tensor-product structure (TPS) is a factorization of the ambient space
 * given by factor dimensions and a global unitary onto the reference product
 * basis. Additivity of a Hamiltonian in some TPS is equivalent to its
 * spectrum being a Minkowski sum of d_a and d_b reals, which is decided
 * exactly by backtracking over the eigenvalue multiset; eigenvalues are
 * unitary invariants, so a failed search certifies that no TPS works.
 */

namespace divisio {

struct TensorProductStructure {
  Index dim_a = 0;
  Index dim_b = 0;
  Matrix global_unitary;  // maps the abstract space onto the product basis
  std::string label;
};

/// Throws unless the unitary is square of order dim_a*dim_b and unitary
/// within tolerance.
void check_tps(const TensorProductStructure& tps);

/// The trivial structure whose unitary is the identity.
TensorProductStructure reference_tps(Index dim_a, Index dim_b);

struct AdditiveDivision {
  TensorProductStructure tps;
  Matrix h_a;  // Hermitian dim_a factor Hamiltonian
  Matrix h_b;  // Hermitian dim_b factor Hamiltonian
  double residual = 0.0;
};

/// Node of a recursive coarse-graining. A node either carries a successful
/// split (with two children) or is a leaf / marked indivisible.
struct DivisionTree {
  std::vector<Index> dims;
  Matrix hamiltonian;
  bool indivisible = false;
  std::optional<AdditiveDivision> split;
  std::vector<DivisionTree> children;
};

/**
 * Decide whether the eigenvalue multiset factorizes as {a_i + b_j}.
 *
 * Gauge: a(0) = 0 and a ascending; b then contains the smallest eigenvalue.
 * Backtracking tries the next a-entry before the next b-entry, so the first
 * solution found is lexicographically smallest in a. Returns nullopt when
 * the search exhausts all candidates.
 */
std::optional<std::pair<RealVector, RealVector>> spectrum_sum_decomposition(
    const RealVector& eigenvalues, Index d_a, Index d_b);

/// Hilbert-Schmidt-optimal additive approximation of h in the reference
/// product structure, trace split evenly between the factors.
std::pair<Matrix, Matrix> additive_projection(const Matrix& h, Index d_a, Index d_b);

/// Relative HS distance from the conjugated Hamiltonian to its best additive
/// approximation; 0 exactly when h is additive in the given structure.
double interaction_residual(const Matrix& h, const TensorProductStructure& tps);

/**
 * Recover an additive division of h, if one exists.
 *
 * The global unitary pairs eigenvectors with product-basis slots ordered by
 * the recovered eigenvalue sums; rank-order alignment of the two ascending
 * multisets is the HS-optimal assignment, including inside degenerate
 * clusters. Returns nullopt when the spectrum does not sum-decompose or the
 * realized residual exceeds tolerance.
 */
std::optional<AdditiveDivision> find_additive_tps(const Matrix& h, Index d_a, Index d_b);

/**
 * Multi-restart descent over global unitaries minimizing the interaction
 * residual. Starts from the identity, the spectral reconstruction when one
 * exists, and seeded random unitaries; never returns a result worse than
 * the identity structure. Deterministic for a fixed seed.
 */
std::pair<TensorProductStructure, double> optimize_tps(const Matrix& h, Index d_a, Index d_b,
                                                       int restarts = 8, std::uint64_t seed = 0);

/// Normalized commutator magnitude of two factor-A observables lifted to the
/// ambient space through their respective structures.
double cross_division_commutator_defect(const Matrix& obs_a, const TensorProductStructure& tps1,
                                        const Matrix& obs_d, const TensorProductStructure& tps2);

/// Von Neumann entropy (nats) of the factor-A marginal of a pure state read
/// in the given structure.
double entanglement_in_division(const Vector& state, const TensorProductStructure& tps);

/// Recursive additive splitting: dims[0] against the rest, then recurse into
/// the second factor. Nodes where no split exists are marked indivisible.
DivisionTree coarse_grain(const Matrix& h, const std::vector<Index>& dims);

}  // namespace divisio
