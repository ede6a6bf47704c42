// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/decoherence.hpp"

#include <cmath>

#include "divisio/division_search.hpp"

namespace divisio {

namespace {

void check_times(const RealVector& times) {
  if (times.size() == 0) throw std::invalid_argument("times must be non-empty");
  if (std::abs(times(0)) > 1e-12) throw std::invalid_argument("times must start at 0");
  for (Index k = 1; k < times.size(); ++k)
    if (times(k) <= times(k - 1)) throw std::invalid_argument("times must be ascending");
}

// Deterministic per-column phase gauge: largest-modulus entry real positive.
Matrix fix_column_phases(Matrix m) {
  for (Index c = 0; c < m.cols(); ++c) {
    Index lead = 0;
    for (Index r = 1; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(lead, c))) lead = r;
    const Complex z = m(lead, c);
    if (std::abs(z) > 0.0) m.col(c) *= std::conj(z) / std::abs(z);
  }
  return m;
}

Matrix pointer_basis_from_structure(const PointerStructure& ps) {
  const HermitianEigensystem es = hermitian_eig(ps.pointer_observable);
  return fix_column_phases(es.eigenvectors);
}

// Inter-sector coherence: largest HS norm of an off-diagonal sector block of
// the reduced density matrix expressed in the pointer basis.
double sector_coherence(const Matrix& rho_pointer, const std::vector<Index>& sector_dims) {
  if (sector_dims.size() < 2) return 0.0;
  std::vector<Index> offsets(sector_dims.size(), 0);
  for (std::size_t s = 1; s < sector_dims.size(); ++s)
    offsets[s] = offsets[s - 1] + sector_dims[s - 1];
  double worst = 0.0;
  for (std::size_t s = 0; s < sector_dims.size(); ++s)
    for (std::size_t r = s + 1; r < sector_dims.size(); ++r)
      worst = std::max(
          worst, rho_pointer.block(offsets[s], offsets[r], sector_dims[s], sector_dims[r]).norm());
  return worst;
}

struct ExactEvolution {
  HermitianEigensystem eigensystem;
  Vector initial_in_eigenbasis;

  Vector state_at(double t) const {
    const Complex iu(0.0, 1.0);
    Vector c = initial_in_eigenbasis;
    for (Index k = 0; k < c.size(); ++k)
      c(k) *= std::exp(-iu * eigensystem.eigenvalues(k) * t);
    return eigensystem.eigenvectors * c;
  }
};

ExactEvolution prepare_evolution(const Matrix& h, const Vector& psi0) {
  HermitianEigensystem es = hermitian_eig(h);
  Vector c = es.eigenvectors.adjoint() * psi0;
  return {std::move(es), std::move(c)};
}

}  // namespace

void check_model(const CentralSpinModel& model) {
  if (model.n_env < 1 || model.n_env > 10)
    throw std::invalid_argument("CentralSpinModel: n_env must be between 1 and 10");
  if (model.couplings.size() != model.n_env)
    throw std::invalid_argument("CentralSpinModel: couplings length must equal n_env");
  if (model.system_initial.size() != 2 || std::abs(model.system_initial.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("CentralSpinModel: system state must be a unit 2-vector");
  if (model.env_initial.size() != static_cast<std::size_t>(model.n_env))
    throw std::invalid_argument("CentralSpinModel: need one initial state per environment qubit");
  for (const Vector& v : model.env_initial)
    if (v.size() != 2 || std::abs(v.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("CentralSpinModel: environment states must be unit 2-vectors");
}

Matrix build_hamiltonian(const CentralSpinModel& model) {
  check_model(model);
  const int n = model.n_env;
  const Index dim_env = Index{1} << n;
  Matrix h = Matrix::Zero(2 * dim_env, 2 * dim_env);
  for (Index e = 0; e < dim_env; ++e) {
    double field = 0.0;
    for (int k = 0; k < n; ++k) {
      const bool down = (e >> (n - 1 - k)) & 1;  // qubit 0 is the slowest index
      field += model.couplings(k) * (down ? -1.0 : 1.0);
    }
    h(e, e) = field;
    h(dim_env + e, dim_env + e) = -field;
  }
  return h;
}

Matrix predict_pointer_basis(const CentralSpinModel& model) {
  check_model(model);
  const Index dim_env = Index{1} << model.n_env;
  const CompositeOperator coupling(2, dim_env, build_hamiltonian(model));
  return pointer_basis_from_structure(extract_pointer_structure(coupling));
}

DecoherenceReport evolve(const CentralSpinModel& model, const RealVector& times) {
  check_model(model);
  check_times(times);
  const Index dim_env = Index{1} << model.n_env;

  const Matrix h = build_hamiltonian(model);
  const Matrix pointer = predict_pointer_basis(model);

  // Product initial state, system as the slow factor and environment qubit 0
  // as the slowest environment index.
  Vector env_part = Vector::Ones(1);
  for (const Vector& env : model.env_initial) {
    Vector grown(env_part.size() * 2);
    for (Index i = 0; i < env_part.size(); ++i) {
      grown(2 * i) = env_part(i) * env(0);
      grown(2 * i + 1) = env_part(i) * env(1);
    }
    env_part.swap(grown);
  }
  Vector psi0(2 * dim_env);
  psi0.head(dim_env) = model.system_initial(0) * env_part;
  psi0.tail(dim_env) = model.system_initial(1) * env_part;

  const ExactEvolution evolution = prepare_evolution(h, psi0);

  DecoherenceReport report;
  report.times = times;
  report.coherence.resize(times.size());
  report.pointer_basis_used = pointer;

  for (Index k = 0; k < times.size(); ++k) {
    const Vector psi_t = evolution.state_at(times(k));
    const Matrix rho = partial_trace(psi_t * psi_t.adjoint(), 2, dim_env, Side::Second);
    const Matrix rho_p = pointer.adjoint() * rho * pointer;
    report.coherence(k) = std::abs(rho_p(0, 1));
  }

  // Closed-form dephasing factor per environment qubit.
  RealVector reference(times.size());
  const double c0 = report.coherence(0);
  for (Index k = 0; k < times.size(); ++k) {
    double magnitude = 1.0;
    for (int q = 0; q < model.n_env; ++q) {
      const Vector& env = model.env_initial[static_cast<std::size_t>(q)];
      const double p_up = std::norm(env(0));
      const double p_down = std::norm(env(1));
      const Complex iu(0.0, 1.0);
      const double phase = 2.0 * model.couplings(q) * times(k);
      magnitude *= std::abs(p_up * std::exp(iu * phase) + p_down * std::exp(-iu * phase));
    }
    reference(k) = c0 * magnitude;
  }
  report.max_deviation = (report.coherence - reference).cwiseAbs().maxCoeff();
  report.analytic_reference = std::move(reference);
  return report;
}

DecoherenceReport validate_division(const Matrix& h_total, Index d_s, Index d_e,
                                    const Vector& env_state, const RealVector& times,
                                    std::optional<Vector> system_state, std::uint64_t seed) {
  if (h_total.rows() != h_total.cols() || h_total.rows() != d_s * d_e)
    throw std::invalid_argument("validate_division: dimensions do not factor the Hamiltonian");
  if (env_state.size() != d_e || std::abs(env_state.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("validate_division: environment state must be a unit vector");
  check_times(times);

  const auto [h_s, h_e] = additive_projection(h_total, d_s, d_e);
  const Matrix additive = tensor(h_s, Matrix::Identity(d_e, d_e)) +
                          tensor(Matrix::Identity(d_s, d_s), h_e);
  const CompositeOperator interaction(d_s, d_e, h_total - additive);

  const SeparabilityVerdict verdict = is_separable(interaction, seed);
  if (!verdict.separable)
    throw NonseparableInteraction(
        "validate_division: interaction term is not separable in this division");

  const PointerStructure ps = extract_pointer_structure(interaction, seed);
  const Matrix pointer = pointer_basis_from_structure(ps);

  Vector probe;
  if (system_state) {
    if (system_state->size() != d_s || std::abs(system_state->norm() - 1.0) > 1e-9)
      throw std::invalid_argument("validate_division: system state must be a unit vector");
    probe = *system_state;
  } else {
    probe = pointer.rowwise().sum() / std::sqrt(static_cast<double>(d_s));
  }

  Vector psi0(d_s * d_e);
  for (Index i = 0; i < d_s; ++i) psi0.segment(i * d_e, d_e) = probe(i) * env_state;

  const ExactEvolution evolution = prepare_evolution(h_total, psi0);

  DecoherenceReport report;
  report.times = times;
  report.coherence.resize(times.size());
  report.pointer_basis_used = pointer;
  for (Index k = 0; k < times.size(); ++k) {
    const Vector psi_t = evolution.state_at(times(k));
    const Matrix rho = partial_trace(psi_t * psi_t.adjoint(), d_s, d_e, Side::Second);
    report.coherence(k) = sector_coherence(pointer.adjoint() * rho * pointer,
                                           ps.sector_dimensions);
  }

  // Spectral overlap law for a pure rank-1 coupling with no additive part:
  // coherence_{ss'}(t) = |c_s c_s'| |<E| e^{i (a_s' - a_s) B t} |E>|.
  const OperatorSchmidtDecomposition dec = operator_schmidt(interaction);
  const bool pure_rank1 = dec.schmidt_rank == 1 && hs_norm(additive) <= 1e-12 * hs_norm(h_total);
  if (pure_rank1 && ps.sector_dimensions.size() >= 2) {
    const Matrix coupling_a = dec.coefficients(0) * dec.factors_a[0];
    const Matrix coupling_b = dec.factors_b[0];
    const HermitianEigensystem es_b = hermitian_eig(coupling_b);
    const Vector env_in_b = es_b.eigenvectors.adjoint() * env_state;
    const Vector probe_p = pointer.adjoint() * probe;
    // Sector labels of the A-side coupling in the pointer basis.
    const Matrix a_p = pointer.adjoint() * coupling_a * pointer;

    RealVector reference(times.size());
    std::vector<Index> offsets(ps.sector_dimensions.size(), 0);
    for (std::size_t s = 1; s < ps.sector_dimensions.size(); ++s)
      offsets[s] = offsets[s - 1] + ps.sector_dimensions[s - 1];
    const Complex iu(0.0, 1.0);
    for (Index k = 0; k < times.size(); ++k) {
      double worst = 0.0;
      for (std::size_t s = 0; s < ps.sector_dimensions.size(); ++s)
        for (std::size_t r = s + 1; r < ps.sector_dimensions.size(); ++r) {
          const double a_s = a_p(offsets[s], offsets[s]).real();
          const double a_r = a_p(offsets[r], offsets[r]).real();
          Complex overlap(0.0, 0.0);
          for (Index m = 0; m < env_in_b.size(); ++m)
            overlap += std::norm(env_in_b(m)) *
                       std::exp(iu * (a_r - a_s) * es_b.eigenvalues(m) * times(k));
          double weight = 0.0;
          for (Index i = 0; i < ps.sector_dimensions[s]; ++i)
            for (Index j = 0; j < ps.sector_dimensions[r]; ++j)
              weight = std::max(weight, std::abs(probe_p(offsets[s] + i)) *
                                            std::abs(probe_p(offsets[r] + j)));
          worst = std::max(worst, weight * std::abs(overlap));
        }
      reference(k) = worst;
    }
    report.max_deviation = (report.coherence - reference).cwiseAbs().maxCoeff();
    report.analytic_reference = std::move(reference);
  }
  return report;
}

}  // namespace divisio
