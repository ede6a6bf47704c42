// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "divisio/separability.hpp"

/**
 * @file decoherence.hpp
 * @brief A-posteriori validation of a proposed division: predict the pointer
 *        basis of a separable coupling and verify by exact small-N dynamics
 *        that off-diagonal coherence in that basis decays.
 *
 * The workhorse is a pure-dephasing central-spin model, one system qubit
 * coupled through sigma_z to up to ten environment qubits. For environments
 * prepared in |+> states the coherence follows a product-of-cosines law,
 * which doubles as an independent reference for the exact evolution.
 */

namespace divisio {

struct CentralSpinModel {
  int n_env = 1;                    // 1..10 environment qubits
  RealVector couplings;             // g_k, length n_env
  Vector system_initial;            // unit 2-vector
  std::vector<Vector> env_initial;  // n_env unit 2-vectors
};

/// Throws on out-of-range environment size, length mismatches, or
/// non-normalized states.
void check_model(const CentralSpinModel& model);

struct DecoherenceReport {
  RealVector times;
  RealVector coherence;  // inter-sector off-diagonal magnitude vs time
  Matrix pointer_basis_used;
  std::optional<RealVector> analytic_reference;  // closed-form law when available
  double max_deviation = 0.0;                    // vs the reference when present
};

/// Pure-dephasing Hamiltonian sigma_z (x) sum_k g_k sigma_z^(k), order
/// 2^(n_env+1). No system or environment self-terms.
Matrix build_hamiltonian(const CentralSpinModel& model);

/// Pointer basis of the system qubit as predicted from the coupling's
/// superselection structure; columns ordered by sector index.
Matrix predict_pointer_basis(const CentralSpinModel& model);

/**
 * Exact evolution by eigendecomposition of the full Hamiltonian.
 *
 * The report carries the reduced system coherence in the predicted pointer
 * basis together with the closed-form dephasing reference
 * |prod_k (|a_k|^2 e^{2i g_k t} + |b_k|^2 e^{-2i g_k t})| and the largest
 * deviation between the two. Times must be ascending and start at 0.
 */
DecoherenceReport evolve(const CentralSpinModel& model, const RealVector& times);

/**
 * Generic division validation pipeline: split h_total into its additive part
 * plus interaction, require the interaction to be separable, extract the
 * pointer structure, evolve exactly under h_total and report inter-sector
 * coherence. Throws NonseparableInteraction when the division fails the
 * separability criterion.
 *
 * The optional system_state defaults to the uniform superposition of pointer
 * basis states (the maximal-coherence probe). The analytic reference is
 * filled when the Hamiltonian is a pure rank-1 coupling, where the spectral
 * overlap law applies.
 */
DecoherenceReport validate_division(const Matrix& h_total, Index d_s, Index d_e,
                                    const Vector& env_state, const RealVector& times,
                                    std::optional<Vector> system_state = std::nullopt,
                                    std::uint64_t seed = 0);

}  // namespace divisio
