// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include "divisio/json_io.hpp"

namespace divisio {

using nlohmann::json;

namespace {

void require_fields(const json& j, std::initializer_list<const char*> fields,
                    const char* context) {
  for (const char* f : fields)
    if (!j.contains(f))
      throw std::invalid_argument(std::string(context) + ": missing field '" + f + "'");
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) {
  require_fields(j, {"rows", "cols", "re", "im"}, "matrix");
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows < 0 || cols < 0 || static_cast<Index>(re.size()) != rows * cols ||
      static_cast<Index>(im.size()) != rows * cols)
    throw std::invalid_argument("matrix: coefficient arrays do not match rows*cols");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k)
      m(i, k) = Complex(re.at(static_cast<std::size_t>(i * cols + k)).get<double>(),
                        im.at(static_cast<std::size_t>(i * cols + k)).get<double>());
  return m;
}

json real_matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("real matrix: expected nested array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("real matrix: ragged rows");
    for (Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

json real_vector_to_json(const RealVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

RealVector real_vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("real vector: expected array");
  RealVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json complex_vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(json::array({v(i).real(), v(i).imag()}));
  return arr;
}

Vector complex_vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("complex vector: expected array of [re, im]");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const auto& pair = j.at(static_cast<std::size_t>(i));
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("complex vector: entries must be [re, im] pairs");
    v(i) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return v;
}

json composite_operator_to_json(const CompositeOperator& op) {
  return json{{"dim_a", op.dim_a()}, {"dim_b", op.dim_b()}, {"matrix", matrix_to_json(op.matrix())}};
}

CompositeOperator composite_operator_from_json(const json& j) {
  require_fields(j, {"dim_a", "dim_b", "matrix"}, "composite operator");
  return CompositeOperator(j.at("dim_a").get<Index>(), j.at("dim_b").get<Index>(),
                           matrix_from_json(j.at("matrix")));
}

json schmidt_to_json(const OperatorSchmidtDecomposition& dec) {
  json factors_a = json::array(), factors_b = json::array();
  for (const Matrix& f : dec.factors_a) factors_a.push_back(matrix_to_json(f));
  for (const Matrix& f : dec.factors_b) factors_b.push_back(matrix_to_json(f));
  return json{{"schmidt_rank", dec.schmidt_rank},
              {"coefficients", real_vector_to_json(dec.coefficients)},
              {"factors_a", std::move(factors_a)},
              {"factors_b", std::move(factors_b)}};
}

json verdict_to_json(const SeparabilityVerdict& verdict) {
  json j{{"separable", verdict.separable},
         {"commutator_defect", verdict.commutator_defect},
         {"offdiag_residual", verdict.offdiag_residual}};
  if (verdict.local_basis_a) j["local_basis_a"] = matrix_to_json(*verdict.local_basis_a);
  if (verdict.local_basis_b) j["local_basis_b"] = matrix_to_json(*verdict.local_basis_b);
  if (verdict.spectral_coefficients)
    j["spectral_coefficients"] = real_matrix_to_json(*verdict.spectral_coefficients);
  return j;
}

json pointer_structure_to_json(const PointerStructure& ps) {
  json projectors = json::array();
  for (const Matrix& p : ps.sector_projectors) projectors.push_back(matrix_to_json(p));
  return json{{"sector_projectors", std::move(projectors)},
              {"pointer_observable", matrix_to_json(ps.pointer_observable)},
              {"sector_dimensions", ps.sector_dimensions}};
}

json tps_to_json(const TensorProductStructure& tps) {
  return json{{"dim_a", tps.dim_a},
              {"dim_b", tps.dim_b},
              {"label", tps.label},
              {"global_unitary", matrix_to_json(tps.global_unitary)}};
}

TensorProductStructure tps_from_json(const json& j) {
  require_fields(j, {"dim_a", "dim_b", "global_unitary"}, "tensor product structure");
  TensorProductStructure tps{j.at("dim_a").get<Index>(), j.at("dim_b").get<Index>(),
                             matrix_from_json(j.at("global_unitary")),
                             j.value("label", std::string{})};
  check_tps(tps);
  return tps;
}

json division_to_json(const AdditiveDivision& div) {
  return json{{"tps", tps_to_json(div.tps)},
              {"h_a", matrix_to_json(div.h_a)},
              {"h_b", matrix_to_json(div.h_b)},
              {"residual", div.residual}};
}

json division_tree_to_json(const DivisionTree& tree) {
  json j{{"dims", tree.dims},
         {"indivisible", tree.indivisible},
         {"residual", tree.split ? tree.split->residual : 0.0}};
  if (tree.split) j["split"] = division_to_json(*tree.split);
  if (tree.dims.size() == 1) j["hamiltonian"] = matrix_to_json(tree.hamiltonian);
  if (!tree.children.empty()) {
    json children = json::array();
    for (const DivisionTree& child : tree.children)
      children.push_back(division_tree_to_json(child));
    j["children"] = std::move(children);
  }
  return j;
}

json twobody_system_to_json(const TwoBodySystem& sys) {
  json potential;
  if (std::holds_alternative<RelativePotential>(sys.potential))
    potential = json{{"relative", true}};
  else
    potential = json{{"quadratic", real_matrix_to_json(std::get<QuadraticPotential>(sys.potential).k)}};
  return json{{"m1", sys.m1}, {"m2", sys.m2}, {"potential", std::move(potential)}};
}

TwoBodySystem twobody_system_from_json(const json& j) {
  require_fields(j, {"m1", "m2", "potential"}, "two-body system");
  TwoBodySystem sys;
  sys.m1 = j.at("m1").get<double>();
  sys.m2 = j.at("m2").get<double>();
  const auto& pot = j.at("potential");
  if (pot.contains("relative") && pot.at("relative").get<bool>()) {
    sys.potential = RelativePotential{};
  } else if (pot.contains("quadratic")) {
    const RealMatrix k = real_matrix_from_json(pot.at("quadratic"));
    if (k.rows() != 2 || k.cols() != 2)
      throw std::invalid_argument("two-body system: quadratic potential must be 2x2");
    QuadraticPotential quad;
    quad.k = k;
    sys.potential = quad;
  } else {
    throw std::invalid_argument("two-body system: potential must be relative or quadratic");
  }
  check_system(sys);
  return sys;
}

json decoupling_check_to_json(const DecouplingCheck& check) {
  json j{{"kinetic_cross", check.kinetic_cross},
         {"potential_cross", check.potential_cross},
         {"residual", check.residual()}};
  if (check.potential_single_coordinate)
    j["potential_single_coordinate"] = *check.potential_single_coordinate;
  return j;
}

json decoupled_form_to_json(const DecoupledForm& form) {
  return json{{"transform", real_matrix_to_json(form.transform.matrix())},
              {"total_mass", form.total_mass},
              {"reduced_mass", form.reduced_mass},
              {"mode_frequencies", real_vector_to_json(form.mode_frequencies)},
              {"has_imaginary_modes", form.has_imaginary_modes},
              {"cross_coupling_residual", form.cross_coupling_residual}};
}

json central_spin_model_to_json(const CentralSpinModel& model) {
  json env = json::array();
  for (const Vector& v : model.env_initial) env.push_back(complex_vector_to_json(v));
  return json{{"n_env", model.n_env},
              {"g", real_vector_to_json(model.couplings)},
              {"system_initial", complex_vector_to_json(model.system_initial)},
              {"env_initial", std::move(env)}};
}

CentralSpinModel central_spin_model_from_json(const json& j) {
  require_fields(j, {"n_env", "g", "system_initial", "env_initial"}, "central-spin model");
  CentralSpinModel model;
  model.n_env = j.at("n_env").get<int>();
  model.couplings = real_vector_from_json(j.at("g"));
  model.system_initial = complex_vector_from_json(j.at("system_initial"));
  for (const auto& env : j.at("env_initial"))
    model.env_initial.push_back(complex_vector_from_json(env));
  check_model(model);
  return model;
}

json decoherence_report_to_json(const DecoherenceReport& report) {
  json j{{"times", real_vector_to_json(report.times)},
         {"coherence", real_vector_to_json(report.coherence)},
         {"pointer_basis_used", matrix_to_json(report.pointer_basis_used)},
         {"max_deviation", report.max_deviation}};
  if (report.analytic_reference)
    j["analytic_reference"] = real_vector_to_json(*report.analytic_reference);
  else
    j["analytic_reference"] = nullptr;
  return j;
}

}  // namespace divisio
