// Copyright 2026 The ttqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial kernels against their OpenMP twins. Thread count follows
// OMP_NUM_THREADS.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "ttqst/harness.hpp"
#include "ttqst/kernels.hpp"

using namespace ttqst;

namespace {

struct Problem {
  BlockTT a;
  PauliSet set;
  std::vector<double> weights;
  Matrix rho;
  Matrix factor;
};

// Random state, a 5% Pauli sample and random weights at N qubits.
const Problem& problem(std::size_t n) {
  static std::map<std::size_t, Problem> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Problem p;
  p.a = generate_random_state(n, 2, uniform_ranks(n, 2), n - 2, 7 + n);
  p.set = sample_pauli_set(n, measurement_count(n, 0.05), 11 + n);
  std::mt19937_64 rng(13 + n);
  std::normal_distribution<double> g;
  for (std::size_t m = 0; m < p.set.size(); ++m) p.weights.push_back(g(rng));
  if (n <= 8) {
    p.factor = to_matrix(p.a);
    p.rho = p.factor * p.factor.adjoint();
  }
  return cache.emplace(n, std::move(p)).first->second;
}

template <bool Parallel>
void BM_MeasureTT(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  std::vector<Complex> out(p.set.size());
  for (auto _ : state) {
    if (Parallel) {
      kernels::measure_all_parallel(p.a, p.set.strings, out);
    } else {
      kernels::measure_all_serial(p.a, p.set.strings, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.set.size()));
}

template <bool Parallel>
void BM_MeasureDense(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(p.set.size());
  for (auto _ : state) {
    if (Parallel) {
      kernels::measure_all_dense_parallel(p.rho, p.set.strings, out);
    } else {
      kernels::measure_all_dense_serial(p.rho, p.set.strings, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.set.size()));
}

template <bool Parallel>
void BM_PauliSumBatched(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    BlockTT g = Parallel ? kernels::pauli_sum_apply_parallel(p.a, p.set.strings, p.weights, 32, 1e-12)
                         : kernels::pauli_sum_apply_serial(p.a, p.set.strings, p.weights, 32, 1e-12);
    benchmark::DoNotOptimize(g);
  }
}

template <bool Parallel>
void BM_PauliSumMpo(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  const kernels::PauliSumPlan plan(p.set.strings);
  for (auto _ : state) {
    BlockTT g = kernels::pauli_sum_apply_mpo(p.a, plan, p.weights, 1e-12, Parallel);
    benchmark::DoNotOptimize(g);
  }
}

template <bool Parallel>
void BM_DenseGradient(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Matrix g = Parallel ? kernels::dense_pauli_sum_apply_parallel(p.factor, p.set.strings, p.weights)
                        : kernels::dense_pauli_sum_apply_serial(p.factor, p.set.strings, p.weights);
    benchmark::DoNotOptimize(g.data());
  }
}

template <bool Parallel>
void BM_DenseFactorMeasure(benchmark::State& state) {
  const Problem& p = problem(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(p.set.size());
  for (auto _ : state) {
    if (Parallel) {
      kernels::dense_factor_measure_parallel(p.factor, p.set.strings, out);
    } else {
      kernels::dense_factor_measure_serial(p.factor, p.set.strings, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_MeasureTT<false>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureTT<true>)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureDense<false>)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeasureDense<true>)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliSumBatched<false>)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliSumBatched<true>)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliSumMpo<false>)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PauliSumMpo<true>)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseGradient<false>)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseGradient<true>)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseFactorMeasure<false>)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseFactorMeasure<true>)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
