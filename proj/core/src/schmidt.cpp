// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace divisio {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// Coordinates of a (generally non-Hermitian) block in the Hermitian basis of
// its order. For Hermitian input the coordinates are real.
Eigen::VectorXcd block_coordinates(const Matrix& block,
                                   const std::vector<HermitianBasisElement>& basis) {
  Eigen::VectorXcd coords(static_cast<Index>(basis.size()));
  const Complex iu(0.0, 1.0);
  for (std::size_t l = 0; l < basis.size(); ++l) {
    const auto& e = basis[l];
    switch (e.kind) {
      case HermitianBasisElement::Kind::Diagonal:
        coords(static_cast<Index>(l)) = block(e.row, e.col);
        break;
      case HermitianBasisElement::Kind::SymmetricOffdiag:
        coords(static_cast<Index>(l)) = (block(e.row, e.col) + block(e.col, e.row)) * kSqrtHalf;
        break;
      case HermitianBasisElement::Kind::AntisymmetricOffdiag:
        coords(static_cast<Index>(l)) = iu * (block(e.col, e.row) - block(e.row, e.col)) * kSqrtHalf;
        break;
    }
  }
  return coords;
}

// Dense factor from real coordinates in the Hermitian basis.
Matrix factor_from_coordinates(Index n, const std::vector<HermitianBasisElement>& basis,
                               const RealVector& w) {
  Matrix out = Matrix::Zero(n, n);
  const Complex iu(0.0, 1.0);
  for (std::size_t l = 0; l < basis.size(); ++l) {
    const auto& e = basis[l];
    const double c = w(static_cast<Index>(l));
    if (c == 0.0) continue;
    switch (e.kind) {
      case HermitianBasisElement::Kind::Diagonal:
        out(e.row, e.col) += c;
        break;
      case HermitianBasisElement::Kind::SymmetricOffdiag:
        out(e.row, e.col) += c * kSqrtHalf;
        out(e.col, e.row) += c * kSqrtHalf;
        break;
      case HermitianBasisElement::Kind::AntisymmetricOffdiag:
        out(e.row, e.col) += c * iu * kSqrtHalf;
        out(e.col, e.row) -= c * iu * kSqrtHalf;
        break;
    }
  }
  return out;
}

// First entry with modulus above the noise floor, scanned row-major.
Complex first_significant_entry(const Matrix& m) {
  const double floor = 1e-12 * (1.0 + max_abs(m));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > floor) return m(i, j);
  return Complex(0.0, 0.0);
}

// Lexicographic comparison of factor entries, row-major, real part before
// imaginary part. Used only to order terms inside degenerate blocks.
bool factor_less(const Matrix& a, const Matrix& b) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      const Complex x = a(i, j), y = b(i, j);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  return false;
}

}  // namespace

std::vector<HermitianBasisElement> hermitian_basis(Index n) {
  std::vector<HermitianBasisElement> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    basis.push_back({i, i, HermitianBasisElement::Kind::Diagonal});
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      basis.push_back({i, j, HermitianBasisElement::Kind::SymmetricOffdiag});
      basis.push_back({i, j, HermitianBasisElement::Kind::AntisymmetricOffdiag});
    }
  return basis;
}

Matrix hermitian_basis_matrix(Index n, const HermitianBasisElement& e) {
  Matrix m = Matrix::Zero(n, n);
  const Complex iu(0.0, 1.0);
  switch (e.kind) {
    case HermitianBasisElement::Kind::Diagonal:
      m(e.row, e.col) = 1.0;
      break;
    case HermitianBasisElement::Kind::SymmetricOffdiag:
      m(e.row, e.col) = kSqrtHalf;
      m(e.col, e.row) = kSqrtHalf;
      break;
    case HermitianBasisElement::Kind::AntisymmetricOffdiag:
      m(e.row, e.col) = iu * kSqrtHalf;
      m(e.col, e.row) = -iu * kSqrtHalf;
      break;
  }
  return m;
}

Matrix OperatorSchmidtDecomposition::reconstruct() const {
  if (schmidt_rank == 0) return Matrix();
  const Index da = factors_a.front().rows(), db = factors_b.front().rows();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (Index t = 0; t < schmidt_rank; ++t)
    out += coefficients(t) * tensor(factors_a[t], factors_b[t]);
  return out;
}

RealMatrix realign(const CompositeOperator& op) {
  const Index da = op.dim_a(), db = op.dim_b();
  const auto basis_a = hermitian_basis(da);
  const auto basis_b = hermitian_basis(db);
  const Matrix& m = op.matrix();

  RealMatrix r(da * da, db * db);
  // Row index k runs over the A-side basis; each off-diagonal (i,i') block of
  // the operator feeds the symmetric/antisymmetric rows through its real and
  // imaginary parts, so the whole rearrangement costs O(dim^2).
  for (std::size_t k = 0; k < basis_a.size(); ++k) {
    const auto& e = basis_a[k];
    const Matrix block = m.block(e.row * db, e.col * db, db, db);
    const Eigen::VectorXcd coords = block_coordinates(block, basis_b);
    switch (e.kind) {
      case HermitianBasisElement::Kind::Diagonal:
        r.row(static_cast<Index>(k)) = coords.real().transpose();
        break;
      case HermitianBasisElement::Kind::SymmetricOffdiag:
        r.row(static_cast<Index>(k)) = (2.0 * kSqrtHalf) * coords.real().transpose();
        break;
      case HermitianBasisElement::Kind::AntisymmetricOffdiag:
        r.row(static_cast<Index>(k)) = (2.0 * kSqrtHalf) * coords.imag().transpose();
        break;
    }
  }
  return r;
}

OperatorSchmidtDecomposition operator_schmidt(const CompositeOperator& op) {
  const Index da = op.dim_a(), db = op.dim_b();
  const auto basis_a = hermitian_basis(da);
  const auto basis_b = hermitian_basis(db);

  const RealMatrix r = realign(op);
  Eigen::BDCSVD<RealMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();

  const double cutoff = sigma.size() > 0 ? tol::kRankCut * sigma(0) : 0.0;
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff && sigma(rank) > 0.0) ++rank;

  OperatorSchmidtDecomposition dec;
  dec.schmidt_rank = rank;
  dec.coefficients = sigma.head(rank);
  dec.factors_a.reserve(static_cast<std::size_t>(rank));
  dec.factors_b.reserve(static_cast<std::size_t>(rank));
  for (Index t = 0; t < rank; ++t) {
    Matrix fa = factor_from_coordinates(da, basis_a, svd.matrixU().col(t));
    Matrix fb = factor_from_coordinates(db, basis_b, svd.matrixV().col(t));
    // Joint sign gauge: first significant A-side entry positive.
    const Complex lead = first_significant_entry(fa);
    const double s = (lead.real() != 0.0) ? lead.real() : lead.imag();
    if (s < 0.0) {
      fa = -fa;
      fb = -fb;
    }
    dec.factors_a.push_back(std::move(fa));
    dec.factors_b.push_back(std::move(fb));
  }

  // Deterministic order inside degenerate coefficient blocks.
  Index lo = 0;
  while (lo < rank) {
    Index hi = lo + 1;
    while (hi < rank && dec.coefficients(lo) - dec.coefficients(hi) <=
                            tol::kRankCut * (1.0 + dec.coefficients(0)))
      ++hi;
    if (hi - lo > 1) {
      std::vector<Index> order(static_cast<std::size_t>(hi - lo));
      std::iota(order.begin(), order.end(), lo);
      std::sort(order.begin(), order.end(), [&](Index x, Index y) {
        return factor_less(dec.factors_a[static_cast<std::size_t>(x)],
                           dec.factors_a[static_cast<std::size_t>(y)]);
      });
      std::vector<Matrix> fa(order.size()), fb(order.size());
      for (std::size_t p = 0; p < order.size(); ++p) {
        fa[p] = dec.factors_a[static_cast<std::size_t>(order[p])];
        fb[p] = dec.factors_b[static_cast<std::size_t>(order[p])];
      }
      for (std::size_t p = 0; p < order.size(); ++p) {
        dec.factors_a[static_cast<std::size_t>(lo) + p] = std::move(fa[p]);
        dec.factors_b[static_cast<std::size_t>(lo) + p] = std::move(fb[p]);
      }
    }
    lo = hi;
  }
  return dec;
}

}  // namespace divisio
