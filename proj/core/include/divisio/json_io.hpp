// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "divisio/decoherence.hpp"
#include "divisio/division_search.hpp"
#include "divisio/schmidt.hpp"
#include "divisio/separability.hpp"
#include "divisio/twobody_cv.hpp"

/**
 * @file json_io.hpp
 * @brief JSON wire formats.
 *
 * Complex matrices serialize as {"rows", "cols", "re", "im"} with row-major
 * coefficient arrays; real matrices as nested arrays of numbers. Parsing
 * validates shapes and re-checks type invariants through the usual checked
 * constructors.
 */

namespace divisio {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const nlohmann::json& j);

nlohmann::json real_vector_to_json(const RealVector& v);
RealVector real_vector_from_json(const nlohmann::json& j);

/// Complex vectors as arrays of [re, im] pairs.
nlohmann::json complex_vector_to_json(const Vector& v);
Vector complex_vector_from_json(const nlohmann::json& j);

nlohmann::json composite_operator_to_json(const CompositeOperator& op);
CompositeOperator composite_operator_from_json(const nlohmann::json& j);

nlohmann::json schmidt_to_json(const OperatorSchmidtDecomposition& dec);
nlohmann::json verdict_to_json(const SeparabilityVerdict& verdict);
nlohmann::json pointer_structure_to_json(const PointerStructure& ps);

nlohmann::json tps_to_json(const TensorProductStructure& tps);
TensorProductStructure tps_from_json(const nlohmann::json& j);

nlohmann::json division_to_json(const AdditiveDivision& div);
nlohmann::json division_tree_to_json(const DivisionTree& tree);

nlohmann::json twobody_system_to_json(const TwoBodySystem& sys);
TwoBodySystem twobody_system_from_json(const nlohmann::json& j);

nlohmann::json decoupling_check_to_json(const DecouplingCheck& check);
nlohmann::json decoupled_form_to_json(const DecoupledForm& form);

nlohmann::json central_spin_model_to_json(const CentralSpinModel& model);
CentralSpinModel central_spin_model_from_json(const nlohmann::json& j);

nlohmann::json decoherence_report_to_json(const DecoherenceReport& report);

}  // namespace divisio
