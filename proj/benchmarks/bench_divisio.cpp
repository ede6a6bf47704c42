// Copyright 2026 The Divisio Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "divisio/decoherence.hpp"
#include "divisio/division_search.hpp"
#include "divisio/schmidt.hpp"
#include "divisio/separability.hpp"

using namespace divisio;

namespace {

CompositeOperator random_op(Index d_a, Index d_b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return CompositeOperator(d_a, d_b, random_hermitian(d_a * d_b, rng));
}

void BM_operator_schmidt(benchmark::State& state) {
  const Index d = state.range(0);
  const CompositeOperator op = random_op(d, d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(operator_schmidt(op));
}
BENCHMARK(BM_operator_schmidt)->Arg(2)->Arg(4)->Arg(8);

void BM_is_separable(benchmark::State& state) {
  const Index d = state.range(0);
  const CompositeOperator op = random_op(d, d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(is_separable(op, 3));
}
BENCHMARK(BM_is_separable)->Arg(2)->Arg(3)->Arg(4);

void BM_find_additive_tps(benchmark::State& state) {
  const Index d = state.range(0);
  std::mt19937_64 rng(4);
  const Matrix h_a = random_hermitian(d, rng);
  const Matrix h_b = random_hermitian(d, rng);
  const Matrix w = random_unitary(d * d, rng);
  const Matrix h = w *
                   (tensor(h_a, Matrix::Identity(d, d)) + tensor(Matrix::Identity(d, d), h_b)) *
                   w.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(find_additive_tps(h, d, d));
}
BENCHMARK(BM_find_additive_tps)->Arg(2)->Arg(3)->Arg(4);

void BM_central_spin_evolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CentralSpinModel model;
  model.n_env = n;
  model.couplings = RealVector::LinSpaced(n, 0.4, 1.5);
  Vector plus(2);
  plus << std::sqrt(0.5), std::sqrt(0.5);
  model.system_initial = plus;
  model.env_initial.assign(static_cast<std::size_t>(n), plus);
  RealVector times = RealVector::LinSpaced(65, 0.0, 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(model, times));
}
BENCHMARK(BM_central_spin_evolve)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
}
