// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>

/**
 * @file operator_core.hpp
 * @brief Dense complex-matrix substrate: tensor products, partial traces,
 *        commutators, Hilbert-Schmidt geometry and Hermitian eigensolves.
 *
 * Index convention used throughout the library: in a bipartite space of
 * dimensions (dim_a, dim_b), factor A is the slow (leftmost) Kronecker
 * index, i.e. the composite basis state |i>_A |j>_B sits at row i*dim_b + j.
 */

namespace divisio {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Hermiticity slack on inputs, relative to the matrix max-norm.
inline constexpr double kHermiticity = 1e-9;
// Verdict-level comparisons (separability, condition checks).
inline constexpr double kVerdict = 1e-8;
// Direct arithmetic reconstructions.
inline constexpr double kReconstruction = 1e-10;
// Schmidt coefficients below kRankCut * sigma_max are treated as noise.
inline constexpr double kRankCut = 1e-10;
// Symplectic-form preservation.
inline constexpr double kSymplectic = 1e-10;
}  // namespace tol

/// Which factor of a bipartite operator an operation refers to.
enum class Side { First, Second };

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// True when max|m - m^dagger| <= kHermiticity * (1 + max|m|).
bool is_hermitian(const Matrix& m, double rel_tol = tol::kHermiticity);

/**
 * A Hermitian operator on a bipartite space with declared factor dimensions.
 *
 * The constructor validates the order against dim_a*dim_b and the
 * Hermiticity tolerance, then symmetrizes the stored matrix as
 * (M + M^dagger)/2 so that I/O rounding cannot propagate asymmetry.
 */
class CompositeOperator {
 public:
  CompositeOperator(Index dim_a, Index dim_b, Matrix matrix);

  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }
  Index dim() const { return dim_a_ * dim_b_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  Index dim_a_;
  Index dim_b_;
  Matrix matrix_;
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigensystem {
  RealVector eigenvalues;
  Matrix eigenvectors;  // columns are the eigenvectors
};

/// Kronecker product with the first argument as the slow index.
Matrix tensor(const Matrix& a, const Matrix& b);

/// Trace over one factor of a (dim_a*dim_b)-dimensional operator.
Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Side traced);
Matrix partial_trace(const CompositeOperator& op, Side traced);

/// a*b - b*a; throws on order mismatch.
Matrix commutator(const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt inner product trace(a^dagger * b) and induced norm.
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

/// Normalized commutator magnitude ||[a,b]|| / (||a|| ||b||); 0 if either
/// argument vanishes.
double commutator_defect(const Matrix& a, const Matrix& b);

/**
 * Eigendecomposition of a Hermitian matrix.
 *
 * The input is symmetrized within the Hermiticity tolerance before the
 * solve; genuinely non-Hermitian input throws std::invalid_argument.
 */
HermitianEigensystem hermitian_eig(const Matrix& m);

/// Seeded random Hermitian matrix with independent N(0,1) entries.
Matrix random_hermitian(Index n, std::mt19937_64& rng);

/// Seeded Haar-like random unitary (QR of a complex Ginibre matrix).
Matrix random_unitary(Index n, std::mt19937_64& rng);

/// Normalized random complex state vector.
Vector random_state(Index n, std::mt19937_64& rng);

}  // namespace divisio
