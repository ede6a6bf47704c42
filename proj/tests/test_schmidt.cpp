// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "divisio/schmidt.hpp"
#include "test_helpers.hpp"

using namespace divisio;
using namespace divisio::testing;

namespace {

// Independent realignment oracle: assemble the coordinate matrix entry by
// entry from dense basis matrices and Hilbert-Schmidt inner products.
RealMatrix realign_oracle(const CompositeOperator& op) {
  const Index da = op.dim_a(), db = op.dim_b();
  const auto basis_a = hermitian_basis(da);
  const auto basis_b = hermitian_basis(db);
  RealMatrix r(da * da, db * db);
  for (std::size_t k = 0; k < basis_a.size(); ++k)
    for (std::size_t l = 0; l < basis_b.size(); ++l) {
      const Matrix product =
          tensor(hermitian_basis_matrix(da, basis_a[k]), hermitian_basis_matrix(db, basis_b[l]));
      r(static_cast<Index>(k), static_cast<Index>(l)) = hs_inner(product, op.matrix()).real();
    }
  return r;
}

RealVector singular_values_oracle(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues();
}

void check_invariants(const CompositeOperator& op, const OperatorSchmidtDecomposition& dec) {
  REQUIRE(dec.schmidt_rank > 0);
  const double norm = hs_norm(op.matrix());
  CHECK(hs_norm(dec.reconstruct() - op.matrix()) / norm <= 1e-10);
  for (Index s = 0; s < dec.schmidt_rank; ++s) {
    CHECK(dec.coefficients(s) > 0.0);
    if (s > 0) CHECK(dec.coefficients(s) <= dec.coefficients(s - 1));
    CHECK(is_hermitian(dec.factors_a[static_cast<std::size_t>(s)]));
    CHECK(is_hermitian(dec.factors_b[static_cast<std::size_t>(s)]));
    for (Index t = 0; t < dec.schmidt_rank; ++t) {
      const double expected = s == t ? 1.0 : 0.0;
      CHECK(std::abs(hs_inner(dec.factors_a[static_cast<std::size_t>(s)],
                              dec.factors_a[static_cast<std::size_t>(t)]) -
                     expected) <= 1e-10);
      CHECK(std::abs(hs_inner(dec.factors_b[static_cast<std::size_t>(s)],
                              dec.factors_b[static_cast<std::size_t>(t)]) -
                     expected) <= 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("operator_schmidt: rank-1 product operator") {
  const CompositeOperator op(2, 2, tensor(pauli_z(), pauli_z()));
  const auto dec = operator_schmidt(op);
  REQUIRE(dec.schmidt_rank == 1);
  CHECK(dec.coefficients(0) == doctest::Approx(2.0));
  // Factors are sigma_z/sqrt(2) up to a joint sign.
  const double overlap = hs_inner(dec.factors_a[0], pauli_z()).real() *
                         hs_inner(dec.factors_b[0], pauli_z()).real();
  CHECK(std::abs(overlap) == doctest::Approx(2.0));
  check_invariants(op, dec);
}

TEST_CASE("operator_schmidt: two equal terms from xx + zz") {
  const CompositeOperator op(2, 2, tensor(pauli_x(), pauli_x()) + tensor(pauli_z(), pauli_z()));
  const auto dec = operator_schmidt(op);
  REQUIRE(dec.schmidt_rank == 2);
  CHECK(dec.coefficients(0) == doctest::Approx(2.0));
  CHECK(dec.coefficients(1) == doctest::Approx(2.0));
  check_invariants(op, dec);
  // The factor pairs span {sigma_x, sigma_z}/sqrt(2) up to degenerate mixing.
  for (const Matrix& f : dec.factors_a) {
    const double x = hs_inner(f, pauli_x()).real();
    const double z = hs_inner(f, pauli_z()).real();
    CHECK(x * x / 2.0 + z * z / 2.0 == doctest::Approx(1.0));
    CHECK(std::abs(hs_inner(f, identity2())) <= 1e-12);
    CHECK(std::abs(hs_inner(f, pauli_y())) <= 1e-12);
  }
  // Realignment singular values agree with the dense SVD oracle.
  const RealVector sv = singular_values_oracle(realign_oracle(op));
  CHECK(sv(0) == doctest::Approx(2.0));
  CHECK(sv(1) == doctest::Approx(2.0));
  CHECK(sv(2) <= 1e-12);
}

TEST_CASE("operator_schmidt: random 4x4 (x) 4x4") {
  std::mt19937_64 rng(23);
  const CompositeOperator op = random_composite(4, 4, rng);
  const auto dec = operator_schmidt(op);
  CHECK(dec.schmidt_rank <= 16);
  check_invariants(op, dec);
}

TEST_CASE("realign: fixed values") {
  const CompositeOperator id(2, 2, tensor(identity2(), identity2()));
  const RealVector sv = singular_values_oracle(realign(id));
  CHECK(sv(0) == doctest::Approx(2.0));
  CHECK(sv(1) <= 1e-14);

  // Sum of E_i (x) E_i over an orthonormal Hermitian basis realigns to the
  // identity matrix.
  Matrix entangler = Matrix::Zero(4, 4);
  const auto basis = hermitian_basis(2);
  for (const auto& e : basis) {
    const Matrix b = hermitian_basis_matrix(2, e);
    entangler += tensor(b, b);
  }
  const CompositeOperator op(2, 2, entangler);
  CHECK(max_abs(Matrix(realign(op).cast<Complex>()) - Matrix::Identity(4, 4)) <= 1e-13);
}

TEST_CASE("realign: random instance matches the dense oracle") {
  std::mt19937_64 rng(29);
  const CompositeOperator op = random_composite(3, 4, rng);
  const RealMatrix fast = realign(op);
  const RealMatrix slow = realign_oracle(op);
  CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12);
  const RealVector sv_fast = singular_values_oracle(fast);
  const RealVector sv_slow = singular_values_oracle(slow);
  CHECK((sv_fast - sv_slow).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("operator_schmidt: Parseval identity") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const CompositeOperator op = random_composite(2 + trial % 3, 2 + trial % 4, rng);
    const auto dec = operator_schmidt(op);
    const double sq = dec.coefficients.squaredNorm();
    const double norm_sq = hs_norm(op.matrix()) * hs_norm(op.matrix());
    CHECK(std::abs(sq - norm_sq) <= 1e-9 * norm_sq);
  }
}

TEST_CASE("operator_schmidt: product operators have rank exactly 1") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_hermitian(3, rng);
    const Matrix b = random_hermitian(2, rng);
    const auto dec = operator_schmidt(CompositeOperator(3, 2, tensor(a, b)));
    CHECK(dec.schmidt_rank == 1);
  }
}

TEST_CASE("operator_schmidt: coefficients invariant under product unitaries") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const CompositeOperator op = random_composite(3, 3, rng);
    const Matrix u = tensor(random_unitary(3, rng), random_unitary(3, rng));
    const CompositeOperator rotated(3, 3, u * op.matrix() * u.adjoint());
    const auto dec = operator_schmidt(op);
    const auto dec_rot = operator_schmidt(rotated);
    REQUIRE(dec.schmidt_rank == dec_rot.schmidt_rank);
    CHECK((dec.coefficients - dec_rot.coefficients).cwiseAbs().maxCoeff() <=
          1e-9 * (1.0 + dec.coefficients(0)));
  }
}

TEST_CASE("operator_schmidt: Hermitian input never yields non-Hermitian factors") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const CompositeOperator op = random_composite(2 + trial % 2, 2 + trial % 3, rng);
    const auto dec = operator_schmidt(op);
    for (const Matrix& f : dec.factors_a) CHECK(max_abs(f - f.adjoint()) <= 1e-9 * (1 + max_abs(f)));
    for (const Matrix& f : dec.factors_b) CHECK(max_abs(f - f.adjoint()) <= 1e-9 * (1 + max_abs(f)));
  }
}

TEST_CASE("operator_schmidt: zero operator yields empty decomposition") {
  const CompositeOperator zero(2, 2, Matrix::Zero(4, 4));
  const auto dec = operator_schmidt(zero);
  CHECK(dec.schmidt_rank == 0);
}
