// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/separability.hpp"

#include <cmath>
#include <sstream>

namespace divisio {

namespace {

// Eigenvalue clustering width for the generic-combination eigensolve.
double cluster_width(const RealVector& eigs) {
  const double spread = eigs.size() > 0 ? eigs(eigs.size() - 1) - eigs(0) : 0.0;
  return 1e-8 * std::max(1.0, spread);
}

void simdiag_recurse(const std::vector<Matrix>& family, Matrix& basis, Index offset, Index width,
                     std::mt19937_64& rng, int level, int max_levels) {
  if (level >= max_levels) return;
  const Index n = basis.rows();
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Generic real combination of the family, compressed to the current block.
  Matrix combo = Matrix::Zero(width, width);
  const Matrix block = basis.middleCols(offset, width);
  for (const Matrix& f : family) {
    const double w = gauss(rng);
    combo += w * (block.adjoint() * f * block);
  }
  combo = 0.5 * (combo + combo.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(combo);
  basis.middleCols(offset, width) = block * solver.eigenvectors();

  const RealVector& eigs = solver.eigenvalues();
  const double width_tol = cluster_width(eigs);
  Index lo = 0;
  while (lo < width) {
    Index hi = lo + 1;
    while (hi < width && eigs(hi) - eigs(hi - 1) <= width_tol) ++hi;
    if (hi - lo > 1 && static_cast<Index>(hi - lo) < n)
      simdiag_recurse(family, basis, offset + lo, hi - lo, rng, level + 1, max_levels);
    lo = hi;
  }
}

// Shared implementation of condition (B) given an existing decomposition.
ConditionBResult condition_b_from_dec(const CompositeOperator& op,
                                      const OperatorSchmidtDecomposition& dec,
                                      std::mt19937_64& rng, double tol_verdict) {
  const Index da = op.dim_a(), db = op.dim_b();
  ConditionBResult res;
  if (dec.schmidt_rank == 0) {
    res.diagonalizable = true;
    res.basis_a = Matrix::Identity(da, da);
    res.basis_b = Matrix::Identity(db, db);
    res.offdiag_residual = 0.0;
    return res;
  }
  res.basis_a = simultaneous_diagonalization(dec.factors_a, rng);
  res.basis_b = simultaneous_diagonalization(dec.factors_b, rng);

  const Matrix t =
      tensor(res.basis_a, res.basis_b).adjoint() * op.matrix() * tensor(res.basis_a, res.basis_b);
  const double scale = max_abs(op.matrix());
  double worst = 0.0;
  for (Index r = 0; r < t.rows(); ++r)
    for (Index c = 0; c < t.cols(); ++c)
      if (r != c) worst = std::max(worst, std::abs(t(r, c)));
  res.offdiag_residual = scale > 0.0 ? worst / scale : 0.0;
  res.diagonalizable = res.offdiag_residual <= tol_verdict;
  return res;
}

}  // namespace

EquivalenceViolation::EquivalenceViolation(ConditionTriple v, double defect, double offdiag,
                                           double recon)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "separability conditions disagree: (A)=" << v.a << " (B)=" << v.b << " (C)=" << v.c
            << " [commutator defect " << defect << ", offdiag residual " << offdiag
            << ", reconstruction residual " << recon << "]";
        return msg.str();
      }()),
      verdicts(v),
      commutator_defect(defect),
      offdiag_residual(offdiag),
      reconstruction_residual(recon) {}

Matrix simultaneous_diagonalization(const std::vector<Matrix>& family, std::mt19937_64& rng,
                                    int max_levels) {
  if (family.empty()) throw std::invalid_argument("simultaneous_diagonalization: empty family");
  const Index n = family.front().rows();
  Matrix basis = Matrix::Identity(n, n);
  simdiag_recurse(family, basis, 0, n, rng, 0, max_levels);
  return basis;
}

ConditionCResult check_condition_c(const OperatorSchmidtDecomposition& dec, double tol_verdict) {
  if (dec.schmidt_rank == 0)
    throw std::invalid_argument("check_condition_c: empty decomposition");
  ConditionCResult res;
  // Orthogonal re-mixing inside a degenerate coefficient block spans the same
  // operator subspace, and the commutator is bilinear, so pairwise testing of
  // any block basis decides commutativity of the whole span.
  for (std::size_t i = 0; i < dec.factors_a.size(); ++i)
    for (std::size_t j = i + 1; j < dec.factors_a.size(); ++j) {
      res.defect = std::max(res.defect, commutator_defect(dec.factors_a[i], dec.factors_a[j]));
      res.defect = std::max(res.defect, commutator_defect(dec.factors_b[i], dec.factors_b[j]));
    }
  res.commuting = res.defect <= tol_verdict;
  return res;
}

ConditionBResult check_condition_b(const CompositeOperator& op, std::mt19937_64& rng,
                                   double tol_verdict) {
  return condition_b_from_dec(op, operator_schmidt(op), rng, tol_verdict);
}

ConditionAResult check_condition_a(const CompositeOperator& op, const ConditionBResult& b,
                                   double tol_verdict) {
  if (b.basis_a.size() == 0 || b.basis_b.size() == 0)
    throw std::invalid_argument("check_condition_a: missing condition-(B) witnesses");
  const Index da = op.dim_a(), db = op.dim_b();
  const Matrix product_basis = tensor(b.basis_a, b.basis_b);
  const Matrix t = product_basis.adjoint() * op.matrix() * product_basis;

  ConditionAResult res;
  res.coefficients.resize(da, db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < db; ++j) res.coefficients(i, j) = t(i * db + j, i * db + j).real();

  Matrix diag = Matrix::Zero(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < db; ++j) diag(i * db + j, i * db + j) = res.coefficients(i, j);
  const Matrix recon = product_basis * diag * product_basis.adjoint();
  const double norm = hs_norm(op.matrix());
  res.reconstruction_residual = norm > 0.0 ? hs_norm(recon - op.matrix()) / norm : 0.0;
  res.spectral = res.reconstruction_residual <= tol_verdict;
  return res;
}

SeparabilityVerdict is_separable(const CompositeOperator& op, std::uint64_t seed,
                                 double tol_verdict) {
  std::mt19937_64 rng(seed);
  const OperatorSchmidtDecomposition dec = operator_schmidt(op);

  SeparabilityVerdict verdict;
  if (dec.schmidt_rank == 0) {
    // Zero operator: vacuously diagonal in any product basis.
    verdict.separable = true;
    verdict.local_basis_a = Matrix::Identity(op.dim_a(), op.dim_a());
    verdict.local_basis_b = Matrix::Identity(op.dim_b(), op.dim_b());
    verdict.spectral_coefficients = RealMatrix::Zero(op.dim_a(), op.dim_b());
    return verdict;
  }

  const ConditionCResult c = check_condition_c(dec, tol_verdict);
  const ConditionBResult b = condition_b_from_dec(op, dec, rng, tol_verdict);
  const ConditionAResult a = check_condition_a(op, b, tol_verdict);

  if (a.spectral != b.diagonalizable || b.diagonalizable != c.commuting)
    throw EquivalenceViolation({a.spectral, b.diagonalizable, c.commuting}, c.defect,
                               b.offdiag_residual, a.reconstruction_residual);

  verdict.separable = c.commuting;
  verdict.commutator_defect = c.defect;
  verdict.offdiag_residual = b.offdiag_residual;
  if (verdict.separable) {
    verdict.local_basis_a = b.basis_a;
    verdict.local_basis_b = b.basis_b;
    verdict.spectral_coefficients = a.coefficients;
  }
  return verdict;
}

PointerStructure extract_pointer_structure(const CompositeOperator& h_int, std::uint64_t seed,
                                           double tol_verdict) {
  const Index da = h_int.dim_a(), db = h_int.dim_b();
  std::mt19937_64 rng(seed);
  const OperatorSchmidtDecomposition dec = operator_schmidt(h_int);

  PointerStructure ps;
  if (dec.schmidt_rank == 0) {
    // Zero coupling: one degenerate sector, no superselection.
    ps.sector_projectors = {Matrix::Identity(da, da)};
    ps.pointer_observable = Matrix::Zero(da, da);
    ps.sector_dimensions = {da};
    return ps;
  }

  double defect = 0.0;
  for (std::size_t i = 0; i < dec.factors_a.size(); ++i)
    for (std::size_t j = i + 1; j < dec.factors_a.size(); ++j)
      defect = std::max(defect, commutator_defect(dec.factors_a[i], dec.factors_a[j]));
  if (defect > tol_verdict) {
    std::ostringstream msg;
    msg << "extract_pointer_structure: A-side factors do not commute (defect " << defect << ")";
    throw NonseparableInteraction(msg.str());
  }

  const Matrix u_a = simultaneous_diagonalization(dec.factors_a, rng);
  const Matrix t = tensor(u_a, Matrix::Identity(db, db)).adjoint() * h_int.matrix() *
                   tensor(u_a, Matrix::Identity(db, db));

  // Conditional B-side blocks; equal blocks mean equal coupling rows.
  std::vector<Matrix> blocks(static_cast<std::size_t>(da));
  double block_scale = 0.0;
  for (Index i = 0; i < da; ++i) {
    blocks[static_cast<std::size_t>(i)] = t.block(i * db, i * db, db, db);
    block_scale = std::max(block_scale, hs_norm(blocks[static_cast<std::size_t>(i)]));
  }
  const double merge_tol = tol_verdict * (1.0 + block_scale);

  std::vector<std::vector<Index>> sectors;
  for (Index i = 0; i < da; ++i) {
    bool placed = false;
    for (auto& sector : sectors) {
      const auto rep = static_cast<std::size_t>(sector.front());
      if (hs_norm(blocks[static_cast<std::size_t>(i)] - blocks[rep]) <= merge_tol) {
        sector.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) sectors.push_back({i});
  }

  ps.pointer_observable = Matrix::Zero(da, da);
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    Matrix proj = Matrix::Zero(da, da);
    for (Index i : sectors[s]) proj += u_a.col(i) * u_a.col(i).adjoint();
    ps.pointer_observable += static_cast<double>(s) * proj;
    ps.sector_dimensions.push_back(static_cast<Index>(sectors[s].size()));
    ps.sector_projectors.push_back(std::move(proj));
  }
  return ps;
}

}  // namespace divisio
