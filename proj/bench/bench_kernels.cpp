// Copyright 2026 The Noiseguard Authors.
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

#include <benchmark/benchmark.h>

#include <vector>

#include "noiseguard/kernels.hpp"
#include "noiseguard/oodstat.hpp"
#include "noiseguard/rng.hpp"

namespace {

namespace kn = noiseguard::kernels;

std::vector<double> random_buffer(std::size_t size, std::uint64_t seed) {
  noiseguard::SplitMix64 rng(seed);
  std::vector<double> out(size);
  for (auto& v : out) v = 2.0 * rng.unit() - 1.0;
  return out;
}

template <auto Moments>
void BM_Moments(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto samples = random_buffer(count * dim, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Moments(samples, count, dim));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
}

template <auto Batch>
void BM_Mahalanobis(benchmark::State& state) {
  const auto queries_n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto fit = random_buffer(4 * dim * dim, 2);
  std::vector<std::vector<double>> rows(4 * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].assign(fit.begin() + i * dim, fit.begin() + (i + 1) * dim);
  }
  const auto model = noiseguard::ood::fit_gaussian(rows);
  const auto queries = random_buffer(queries_n * dim, 3);
  std::vector<double> out(queries_n);
  for (auto _ : state) {
    Batch(model.mean(), model.factor(), queries, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(queries_n));
}

void Shapes(benchmark::internal::Benchmark* b) {
  b->Args({2000, 64})->Args({10000, 64})->Args({10000, 256});
}

BENCHMARK(BM_Moments<kn::serial::moments>)->Name("moments/serial")->Apply(Shapes);
BENCHMARK(BM_Moments<kn::omp::moments>)->Name("moments/omp")->Apply(Shapes);
BENCHMARK(BM_Mahalanobis<kn::serial::mahalanobis_batch>)
    ->Name("mahalanobis/serial")
    ->Apply(Shapes);
BENCHMARK(BM_Mahalanobis<kn::omp::mahalanobis_batch>)
    ->Name("mahalanobis/omp")
    ->Apply(Shapes);

}  // namespace

BENCHMARK_MAIN();
