// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "divisio/json_io.hpp"

namespace {

using nlohmann::json;
using namespace divisio;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNonseparable = 3;
constexpr int kExitIndivisible = 4;
constexpr int kExitEquivalenceViolation = 5;

struct Options {
  std::string input_path;
  std::string output_path;
  std::string csv_path;
  std::uint64_t seed = 0;
  double tol_verdict = tol::kVerdict;
  double tol_recon = tol::kReconstruction;
  std::vector<Index> dims;
  std::string criterion = "additive";
  int restarts = 8;
  double t_max = 6.283185307179586;
  int steps = 256;
};

json load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  json j;
  in >> j;
  return j;
}

void emit(const Options& opt, const std::string& command, json payload) {
  json report{{"command", command},
              {"seed", opt.seed},
              {"tol_verdict", opt.tol_verdict},
              {"tol_recon", opt.tol_recon},
              {"report", std::move(payload)}};
  const std::string text = report.dump(2) + "\n";
  if (opt.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.output_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + opt.output_path);
    out << text;
  }
}

// Accept either a bare matrix or a composite operator; dims may override.
CompositeOperator load_operator(const json& j, const std::vector<Index>& dims) {
  if (j.contains("matrix")) {
    if (dims.size() == 2)
      return CompositeOperator(dims[0], dims[1], matrix_from_json(j.at("matrix")));
    return composite_operator_from_json(j);
  }
  if (dims.size() != 2)
    throw std::invalid_argument("bare-matrix input requires --dims d_a d_b");
  return CompositeOperator(dims[0], dims[1], matrix_from_json(j));
}

Matrix load_matrix(const json& j) {
  return j.contains("matrix") ? matrix_from_json(j.at("matrix")) : matrix_from_json(j);
}

int run_schmidt(const Options& opt) {
  const CompositeOperator op = load_operator(load_input(opt.input_path), opt.dims);
  emit(opt, "schmidt", schmidt_to_json(operator_schmidt(op)));
  return kExitOk;
}

int run_separability(const Options& opt) {
  const CompositeOperator op = load_operator(load_input(opt.input_path), opt.dims);
  const SeparabilityVerdict verdict = is_separable(op, opt.seed, opt.tol_verdict);
  emit(opt, "separability", verdict_to_json(verdict));
  return verdict.separable ? kExitOk : kExitNonseparable;
}

int run_pointer(const Options& opt) {
  const CompositeOperator op = load_operator(load_input(opt.input_path), opt.dims);
  const PointerStructure ps = extract_pointer_structure(op, opt.seed, opt.tol_verdict);
  emit(opt, "pointer", pointer_structure_to_json(ps));
  return kExitOk;
}

int run_divide(const Options& opt) {
  const json input = load_input(opt.input_path);
  const CompositeOperator op = load_operator(input, opt.dims);
  const Index d_a = op.dim_a(), d_b = op.dim_b();

  const auto division = find_additive_tps(op.matrix(), d_a, d_b);
  json payload;
  bool success = division.has_value();
  if (division) {
    payload["division"] = division_to_json(*division);
    payload["indivisible"] = false;
  } else {
    payload["indivisible"] = true;
  }

  if (opt.criterion == "separable") {
    // Weaker criterion: separability (rather than additivity) of the
    // Hamiltonian in the best structure the search can offer.
    TensorProductStructure tps = division ? division->tps : reference_tps(d_a, d_b);
    double residual = interaction_residual(op.matrix(), tps);
    if (!division) {
      auto [opt_tps, opt_res] = optimize_tps(op.matrix(), d_a, d_b, opt.restarts, opt.seed);
      tps = std::move(opt_tps);
      residual = opt_res;
    }
    const Matrix conj = tps.global_unitary * op.matrix() * tps.global_unitary.adjoint();
    const SeparabilityVerdict verdict =
        is_separable(CompositeOperator(d_a, d_b, conj), opt.seed, opt.tol_verdict);
    payload["tps"] = tps_to_json(tps);
    payload["interaction_residual"] = residual;
    payload["separable_in_tps"] = verdict.separable;
    success = verdict.separable;
  }
  emit(opt, "divide", std::move(payload));
  return success ? kExitOk : kExitIndivisible;
}

int run_coarse_grain(const Options& opt) {
  if (opt.dims.size() < 2)
    throw std::invalid_argument("coarse-grain requires --dims with at least two factors");
  const Matrix h = load_matrix(load_input(opt.input_path));
  const DivisionTree tree = coarse_grain(h, opt.dims);
  emit(opt, "coarse-grain", division_tree_to_json(tree));
  return tree.indivisible ? kExitIndivisible : kExitOk;
}

int run_twobody(const Options& opt) {
  const TwoBodySystem sys = twobody_system_from_json(load_input(opt.input_path));
  const CanonicalTransform identity{RealMatrix::Identity(4, 4)};
  const CanonicalTransform cm = cm_relative_transform(sys.m1, sys.m2);

  json payload{{"system", twobody_system_to_json(sys)},
               {"total_mass", sys.m1 + sys.m2},
               {"reduced_mass", sys.m1 * sys.m2 / (sys.m1 + sys.m2)},
               {"cm_transform", real_matrix_to_json(cm.matrix())},
               {"identity_check", decoupling_check_to_json(kinetic_decoupling_check(sys, identity))},
               {"cm_check", decoupling_check_to_json(kinetic_decoupling_check(sys, cm))}};
  if (std::holds_alternative<QuadraticPotential>(sys.potential))
    payload["normal_modes"] = decoupled_form_to_json(decouple_quadratic(sys));
  emit(opt, "twobody", std::move(payload));
  return kExitOk;
}

int run_decohere(const Options& opt) {
  const CentralSpinModel model = central_spin_model_from_json(load_input(opt.input_path));
  if (opt.steps < 2) throw std::invalid_argument("--steps must be at least 2");
  RealVector times(opt.steps);
  for (int k = 0; k < opt.steps; ++k)
    times(k) = opt.t_max * static_cast<double>(k) / (opt.steps - 1);

  const DecoherenceReport report = evolve(model, times);
  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path, std::ios::binary);
    if (!csv) throw std::invalid_argument("cannot open csv file: " + opt.csv_path);
    csv << "t,coherence,analytic_reference\n";
    char line[128];
    for (Index k = 0; k < times.size(); ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", report.times(k),
                    report.coherence(k), (*report.analytic_reference)(k));
      csv << line;
    }
  }
  emit(opt, "decohere", decoherence_report_to_json(report));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divisio: separability, divisions and pointer structure of quantum Hamiltonians"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const auto& name :
       {"schmidt", "separability", "pointer", "divide", "coarse-grain", "twobody", "decohere"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", opt.input_path)->required();
    sub->add_option("--output", opt.output_path);
    sub->add_option("--seed", opt.seed);
    sub->add_option("--tol-verdict", opt.tol_verdict);
    sub->add_option("--tol-recon", opt.tol_recon);
    sub->add_option("--dims", opt.dims);
    if (std::string(name) == "divide") {
      sub->add_option("--criterion", opt.criterion)
          ->check(CLI::IsMember({"additive", "separable"}));
      sub->add_option("--restarts", opt.restarts);
    }
    if (std::string(name) == "decohere") {
      sub->add_option("--csv", opt.csv_path);
      sub->add_option("--t-max", opt.t_max);
      sub->add_option("--steps", opt.steps);
    }
    sub->callback([&command, name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (command == "schmidt") return run_schmidt(opt);
    if (command == "separability") return run_separability(opt);
    if (command == "pointer") return run_pointer(opt);
    if (command == "divide") return run_divide(opt);
    if (command == "coarse-grain") return run_coarse_grain(opt);
    if (command == "twobody") return run_twobody(opt);
    if (command == "decohere") return run_decohere(opt);
    std::cerr << "divisio: unknown command\n";
    return kExitInputError;
  } catch (const EquivalenceViolation& e) {
    std::cerr << "divisio: " << e.what() << "\n";
    return kExitEquivalenceViolation;
  } catch (const NonseparableInteraction& e) {
    std::cerr << "divisio: " << e.what() << "\n";
    return kExitNonseparable;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "divisio: invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "divisio: " << e.what() << "\n";
    return kExitInputError;
  }
}
