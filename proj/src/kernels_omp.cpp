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

#include <algorithm>

#include "noiseguard/error.hpp"
#include "noiseguard/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace noiseguard::kernels {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {
namespace {

void accumulate_rows(const double* __restrict centered, std::size_t count,
                     std::size_t dim, std::size_t lo, std::size_t hi,
                     double* __restrict scatter) {
  for (std::size_t n = 0; n < count; ++n) {
    const double* c = centered + n * dim;
    for (std::size_t i = lo; i < hi; ++i) {
      double* row = scatter + i * dim;
      const double ci = c[i];
      for (std::size_t j = i; j < dim; ++j) row[j] += ci * c[j];
    }
  }
}

}  // namespace

Moments moments(std::span<const double> samples, std::size_t count,
                std::size_t dim) {
  if (samples.size() != count * dim) {
    throw DataError("sample buffer does not match count x dim");
  }
  Moments m{count, dim, std::vector<double>(dim, 0.0),
            std::vector<double>(dim * dim, 0.0)};
  if (count == 0) return m;

  const auto n_count = static_cast<long long>(count);
  const auto n_dim = static_cast<long long>(dim);

#pragma omp parallel for schedule(static)
  for (long long d = 0; d < n_dim; ++d) {
    double sum = 0.0;
    for (std::size_t n = 0; n < count; ++n) sum += samples[n * dim + d];
    m.mean[d] = sum / static_cast<double>(count);
  }

  std::vector<double> centered(count * dim);
#pragma omp parallel for schedule(static)
  for (long long n = 0; n < n_count; ++n) {
    for (std::size_t d = 0; d < dim; ++d) {
      centered[n * dim + d] = samples[n * dim + d] - m.mean[d];
    }
  }

  // Each thread owns a block of scatter rows and applies the rank-1 updates
  // for those rows in sample order, matching the serial accumulation.
  constexpr long long kRowBlock = 8;
  const long long blocks = (n_dim + kRowBlock - 1) / kRowBlock;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk * kRowBlock);
    const std::size_t hi = std::min(dim, lo + static_cast<std::size_t>(kRowBlock));
    accumulate_rows(centered.data(), count, dim, lo, hi, m.scatter.data());
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      m.scatter[i * dim + j] = m.scatter[j * dim + i];
    }
  }
  return m;
}

void mahalanobis_batch(std::span<const double> mean,
                       std::span<const double> packed_factor,
                       std::span<const double> queries,
                       std::span<double> out) {
  const std::size_t dim = mean.size();
  const auto n_queries = static_cast<long long>(out.size());
#pragma omp parallel
  {
    std::vector<double> y(dim);
#pragma omp for schedule(static)
    for (long long q = 0; q < n_queries; ++q) {
      for (std::size_t d = 0; d < dim; ++d) {
        y[d] = queries[q * dim + d] - mean[d];
      }
      forward_solve(packed_factor, y);
      double md = 0.0;
      for (double v : y) md += v * v;
      out[q] = md;
    }
  }
}

}  // namespace omp
}  // namespace noiseguard::kernels
