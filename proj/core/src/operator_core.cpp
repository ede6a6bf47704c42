// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/operator_core.hpp"

#include <cmath>

namespace divisio {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double defect = max_abs(m - m.adjoint());
  return defect <= rel_tol * (1.0 + max_abs(m));
}

CompositeOperator::CompositeOperator(Index dim_a, Index dim_b, Matrix matrix)
    : dim_a_(dim_a), dim_b_(dim_b), matrix_(std::move(matrix)) {
  if (dim_a_ < 1 || dim_b_ < 1)
    throw std::invalid_argument("CompositeOperator: factor dimensions must be positive");
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("CompositeOperator: matrix must be square");
  if (matrix_.rows() != dim_a_ * dim_b_)
    throw std::invalid_argument("CompositeOperator: matrix order must equal dim_a*dim_b");
  if (!is_hermitian(matrix_))
    throw std::invalid_argument("CompositeOperator: matrix is not Hermitian within tolerance");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("tensor: inputs must be square");
  const Index na = a.rows(), nb = b.rows();
  Matrix out(na * nb, na * nb);
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Side traced) {
  if (m.rows() != m.cols() || m.rows() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (traced == Side::Second) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        out(i, j) = m.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_a; ++i) out += m.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

Matrix partial_trace(const CompositeOperator& op, Side traced) {
  return partial_trace(op.matrix(), op.dim_a(), op.dim_b(), traced);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("commutator: order mismatch");
  return a * b - b * a;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: order mismatch");
  return (a.adjoint() * b).trace();
}

double hs_norm(const Matrix& a) { return a.norm(); }

double commutator_defect(const Matrix& a, const Matrix& b) {
  const double na = hs_norm(a), nb = hs_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return hs_norm(commutator(a, b)) / (na * nb);
}

HermitianEigensystem hermitian_eig(const Matrix& m) {
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: input is not Hermitian within tolerance");
  Matrix sym = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  return HermitianEigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

Matrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = Complex(gauss(rng), 0.0);
    for (Index j = i + 1; j < n; ++j) {
      const Complex z(gauss(rng), gauss(rng));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

Matrix random_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Fix the phase gauge so the factorization is unique given the input.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

Vector random_state(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

}  // namespace divisio
