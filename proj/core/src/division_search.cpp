// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/division_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace divisio {

namespace {

// Multiset of reals with tolerance-aware extraction.
class FuzzyMultiset {
 public:
  FuzzyMultiset(const RealVector& values, double tol) : tol_(tol) {
    for (Index i = 0; i < values.size(); ++i) values_.insert(values(i));
  }

  bool empty() const { return values_.empty(); }
  double smallest() const { return *values_.begin(); }

  // Remove the element closest to x if it lies within tolerance.
  bool extract(double x) {
    auto it = values_.lower_bound(x - tol_);
    if (it == values_.end() || *it > x + tol_) return false;
    auto best = it;
    for (; it != values_.end() && *it <= x + tol_; ++it)
      if (std::abs(*it - x) < std::abs(*best - x)) best = it;
    values_.erase(best);
    return true;
  }

  void insert(double x) { values_.insert(x); }

 private:
  double tol_;
  std::multiset<double> values_;
};

struct SumSearch {
  Index d_a, d_b;
  double tol;
  std::vector<double> a, b;
  FuzzyMultiset remaining;

  bool remove_row(double a_new) {
    std::size_t done = 0;
    for (; done < b.size(); ++done)
      if (!remaining.extract(a_new + b[done])) break;
    if (done == b.size()) return true;
    for (std::size_t k = 0; k < done; ++k) remaining.insert(a_new + b[k]);
    return false;
  }

  bool remove_col(double b_new) {
    std::size_t done = 0;
    for (; done < a.size(); ++done)
      if (!remaining.extract(a[done] + b_new)) break;
    if (done == a.size()) return true;
    for (std::size_t k = 0; k < done; ++k) remaining.insert(a[k] + b_new);
    return false;
  }

  void restore_row(double a_val) {
    for (double bv : b) remaining.insert(a_val + bv);
  }
  void restore_col(double b_val) {
    for (double av : a) remaining.insert(av + b_val);
  }

  bool search() {
    if (a.size() == static_cast<std::size_t>(d_a) && b.size() == static_cast<std::size_t>(d_b))
      return remaining.empty();
    if (remaining.empty()) return false;
    const double u = remaining.smallest();

    // The smallest unexplained sum pairs a new entry with the smallest
    // counterpart. Extending a first keeps a lexicographically smallest.
    if (a.size() < static_cast<std::size_t>(d_a)) {
      const double cand = u - b.front();
      if (cand >= a.back() - tol && remove_row(cand)) {
        a.push_back(cand);
        if (search()) return true;
        a.pop_back();
        restore_row(cand);
      }
    }
    if (b.size() < static_cast<std::size_t>(d_b)) {
      const double cand = u;  // a(0) = 0
      if (cand >= b.back() - tol && remove_col(cand)) {
        b.push_back(cand);
        if (search()) return true;
        b.pop_back();
        restore_col(cand);
      }
    }
    return false;
  }
};

Matrix real_diag(const RealVector& v) {
  Matrix m = Matrix::Zero(v.size(), v.size());
  for (Index i = 0; i < v.size(); ++i) m(i, i) = v(i);
  return m;
}

// Hermitian generator from d^2 real parameters: diagonal entries first, then
// (re, im) pairs for the upper triangle.
Matrix generator_from_params(Index d, const RealVector& theta) {
  Matrix g = Matrix::Zero(d, d);
  Index p = 0;
  for (Index i = 0; i < d; ++i) g(i, i) = theta(p++);
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      const Complex z(theta(p), theta(p + 1));
      p += 2;
      g(i, j) = z;
      g(j, i) = std::conj(z);
    }
  return g;
}

Matrix unitary_exp(const Matrix& hermitian_generator) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_generator);
  const Complex iu(0.0, 1.0);
  Vector phases(es.eigenvalues().size());
  for (Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(iu * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void check_tps(const TensorProductStructure& tps) {
  if (tps.dim_a < 1 || tps.dim_b < 1)
    throw std::invalid_argument("TensorProductStructure: dimensions must be positive");
  const Index d = tps.dim_a * tps.dim_b;
  if (tps.global_unitary.rows() != d || tps.global_unitary.cols() != d)
    throw std::invalid_argument("TensorProductStructure: unitary order must equal dim_a*dim_b");
  const double defect =
      max_abs(tps.global_unitary.adjoint() * tps.global_unitary - Matrix::Identity(d, d));
  if (defect > 1e-10 * (1.0 + max_abs(tps.global_unitary)))
    throw std::invalid_argument("TensorProductStructure: matrix is not unitary within tolerance");
}

TensorProductStructure reference_tps(Index dim_a, Index dim_b) {
  return {dim_a, dim_b, Matrix::Identity(dim_a * dim_b, dim_a * dim_b), "reference"};
}

std::optional<std::pair<RealVector, RealVector>> spectrum_sum_decomposition(
    const RealVector& eigenvalues, Index d_a, Index d_b) {
  if (d_a < 2 || d_b < 2)
    throw std::invalid_argument("spectrum_sum_decomposition: factor dimensions must be >= 2");
  if (eigenvalues.size() != d_a * d_b)
    throw std::invalid_argument("spectrum_sum_decomposition: size mismatch");

  RealVector sorted = eigenvalues;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const double spread = sorted(sorted.size() - 1) - sorted(0);
  const double scale = std::max(std::abs(sorted(0)), std::abs(sorted(sorted.size() - 1)));
  // The second term absorbs pure floating noise on (near-)flat spectra.
  const double tol = 1e-8 * spread + 1e-12 * (1.0 + scale);

  SumSearch s{d_a, d_b, tol, {0.0}, {sorted(0)}, FuzzyMultiset(sorted, tol)};
  if (!s.remaining.extract(sorted(0)))
    throw std::logic_error("spectrum_sum_decomposition: lost smallest element");
  if (!s.search()) return std::nullopt;

  RealVector a(d_a), b(d_b);
  for (Index i = 0; i < d_a; ++i) a(i) = s.a[static_cast<std::size_t>(i)];
  for (Index j = 0; j < d_b; ++j) b(j) = s.b[static_cast<std::size_t>(j)];
  return std::make_pair(a, b);
}

std::pair<Matrix, Matrix> additive_projection(const Matrix& h, Index d_a, Index d_b) {
  if (h.rows() != h.cols() || h.rows() != d_a * d_b)
    throw std::invalid_argument("additive_projection: dimension mismatch");
  const Complex shift = h.trace() / static_cast<double>(2 * d_a * d_b);
  Matrix h_a = partial_trace(h, d_a, d_b, Side::Second) / static_cast<double>(d_b) -
               shift * Matrix::Identity(d_a, d_a);
  Matrix h_b = partial_trace(h, d_a, d_b, Side::First) / static_cast<double>(d_a) -
               shift * Matrix::Identity(d_b, d_b);
  return {std::move(h_a), std::move(h_b)};
}

double interaction_residual(const Matrix& h, const TensorProductStructure& tps) {
  check_tps(tps);
  if (h.rows() != h.cols() || h.rows() != tps.dim_a * tps.dim_b)
    throw std::invalid_argument("interaction_residual: dimension mismatch");
  const double norm = hs_norm(h);
  if (norm == 0.0) return 0.0;
  const Matrix conj = tps.global_unitary * h * tps.global_unitary.adjoint();
  const auto [h_a, h_b] = additive_projection(conj, tps.dim_a, tps.dim_b);
  const Matrix additive = tensor(h_a, Matrix::Identity(tps.dim_b, tps.dim_b)) +
                          tensor(Matrix::Identity(tps.dim_a, tps.dim_a), h_b);
  return hs_norm(conj - additive) / norm;
}

std::optional<AdditiveDivision> find_additive_tps(const Matrix& h, Index d_a, Index d_b) {
  if (h.rows() != h.cols() || h.rows() != d_a * d_b)
    throw std::invalid_argument("find_additive_tps: dimension mismatch");

  // Fast path: already additive where it stands.
  TensorProductStructure ref = reference_tps(d_a, d_b);
  if (interaction_residual(h, ref) <= tol::kVerdict) {
    auto [h_a, h_b] = additive_projection(h, d_a, d_b);
    AdditiveDivision div{std::move(ref), std::move(h_a), std::move(h_b), 0.0};
    const Matrix target = tensor(div.h_a, Matrix::Identity(d_b, d_b)) +
                          tensor(Matrix::Identity(d_a, d_a), div.h_b);
    div.residual = hs_norm(h) > 0.0 ? hs_norm(h - target) / hs_norm(h) : 0.0;
    return div;
  }

  const HermitianEigensystem es = hermitian_eig(h);
  const auto sum_dec = spectrum_sum_decomposition(es.eigenvalues, d_a, d_b);
  if (!sum_dec) return std::nullopt;
  const auto& [a, b] = *sum_dec;

  // Product-basis slots ordered by target eigenvalue; rank-order alignment
  // with the ascending spectrum is the HS-optimal eigenvector assignment.
  struct Slot {
    double value;
    Index i, j;
  };
  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(d_a * d_b));
  for (Index i = 0; i < d_a; ++i)
    for (Index j = 0; j < d_b; ++j) slots.push_back({a(i) + b(j), i, j});
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& x, const Slot& y) { return x.value < y.value; });

  Matrix u(d_a * d_b, d_a * d_b);
  for (std::size_t k = 0; k < slots.size(); ++k)
    u.row(slots[k].i * d_b + slots[k].j) = es.eigenvectors.col(static_cast<Index>(k)).adjoint();

  AdditiveDivision div;
  div.tps = {d_a, d_b, std::move(u), "spectral"};
  div.h_a = real_diag(a);
  div.h_b = real_diag(b);
  const Matrix conj = div.tps.global_unitary * h * div.tps.global_unitary.adjoint();
  const Matrix target = tensor(div.h_a, Matrix::Identity(d_b, d_b)) +
                        tensor(Matrix::Identity(d_a, d_a), div.h_b);
  div.residual = hs_norm(h) > 0.0 ? hs_norm(conj - target) / hs_norm(h) : 0.0;
  if (div.residual > tol::kVerdict) return std::nullopt;
  return div;
}

std::pair<TensorProductStructure, double> optimize_tps(const Matrix& h, Index d_a, Index d_b,
                                                       int restarts, std::uint64_t seed) {
  if (h.rows() != h.cols() || h.rows() != d_a * d_b)
    throw std::invalid_argument("optimize_tps: dimension mismatch");
  const Index d = d_a * d_b;

  TensorProductStructure best = reference_tps(d_a, d_b);
  double best_residual = interaction_residual(h, best);
  if (best_residual <= tol::kVerdict) return {best, best_residual};

  std::vector<Matrix> bases;
  bases.push_back(Matrix::Identity(d, d));
  if (const auto spectral = find_additive_tps(h, d_a, d_b))
    bases.push_back(spectral->tps.global_unitary);
  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) bases.push_back(random_unitary(d, rng));

  const Index nparams = d * d;
  const double fd_step = 1e-5;

  for (const Matrix& base : bases) {
    RealVector theta = RealVector::Zero(nparams);
    auto objective = [&](const RealVector& t) {
      TensorProductStructure tps{d_a, d_b, unitary_exp(generator_from_params(d, t)) * base, "opt"};
      return interaction_residual(h, tps);
    };
    double f = objective(theta);
    double step = 0.05;
    for (int iter = 0; iter < 150 && f > tol::kVerdict && step > 1e-12; ++iter) {
      RealVector grad(nparams);
      RealVector probe = theta;
      for (Index p = 0; p < nparams; ++p) {
        probe(p) = theta(p) + fd_step;
        const double fp = objective(probe);
        probe(p) = theta(p) - fd_step;
        const double fm = objective(probe);
        probe(p) = theta(p);
        grad(p) = (fp - fm) / (2.0 * fd_step);
      }
      const double gnorm = grad.norm();
      if (gnorm < 1e-12) break;
      bool improved = false;
      while (step > 1e-12) {
        const RealVector trial = theta - (step / gnorm) * grad;
        const double ft = objective(trial);
        if (ft < f) {
          theta = trial;
          f = ft;
          step *= 1.5;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (f < best_residual) {
      best_residual = f;
      best = {d_a, d_b, unitary_exp(generator_from_params(d, theta)) * base, "optimized"};
    }
  }
  return {best, best_residual};
}

double cross_division_commutator_defect(const Matrix& obs_a, const TensorProductStructure& tps1,
                                        const Matrix& obs_d, const TensorProductStructure& tps2) {
  check_tps(tps1);
  check_tps(tps2);
  if (tps1.dim_a * tps1.dim_b != tps2.dim_a * tps2.dim_b)
    throw std::invalid_argument("cross_division_commutator_defect: ambient dimension mismatch");
  if (obs_a.rows() != tps1.dim_a || obs_d.rows() != tps2.dim_a)
    throw std::invalid_argument("cross_division_commutator_defect: observable dimension mismatch");
  const Matrix l1 = tps1.global_unitary.adjoint() *
                    tensor(obs_a, Matrix::Identity(tps1.dim_b, tps1.dim_b)) * tps1.global_unitary;
  const Matrix l2 = tps2.global_unitary.adjoint() *
                    tensor(obs_d, Matrix::Identity(tps2.dim_b, tps2.dim_b)) * tps2.global_unitary;
  return commutator_defect(l1, l2);
}

double entanglement_in_division(const Vector& state, const TensorProductStructure& tps) {
  check_tps(tps);
  if (state.size() != tps.dim_a * tps.dim_b)
    throw std::invalid_argument("entanglement_in_division: dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("entanglement_in_division: state is not normalized");
  const Vector mapped = tps.global_unitary * state;
  const Matrix rho_a =
      partial_trace(mapped * mapped.adjoint(), tps.dim_a, tps.dim_b, Side::Second);
  const HermitianEigensystem es = hermitian_eig(rho_a);
  double entropy = 0.0;
  for (Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double p = es.eigenvalues(k);
    if (p > 1e-14) entropy -= p * std::log(p);
  }
  return std::max(entropy, 0.0);
}

DivisionTree coarse_grain(const Matrix& h, const std::vector<Index>& dims) {
  if (dims.empty()) throw std::invalid_argument("coarse_grain: empty dimension list");
  Index product = 1;
  for (Index d : dims) {
    if (d < 1) throw std::invalid_argument("coarse_grain: dimensions must be positive");
    product *= d;
  }
  if (h.rows() != h.cols() || h.rows() != product)
    throw std::invalid_argument("coarse_grain: dimension factorization mismatch");

  DivisionTree node;
  node.dims = dims;
  node.hamiltonian = h;
  if (dims.size() == 1) return node;

  const Index d_a = dims.front();
  const Index d_b = product / d_a;
  auto division = find_additive_tps(h, d_a, d_b);
  if (!division) {
    node.indivisible = true;
    return node;
  }
  const std::vector<Index> rest(dims.begin() + 1, dims.end());
  node.children.push_back(coarse_grain(division->h_a, {d_a}));
  node.children.push_back(coarse_grain(division->h_b, rest));
  node.split = std::move(division);
  return node;
}

}  // namespace divisio
