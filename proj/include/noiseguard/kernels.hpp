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

#ifndef NOISEGUARD_KERNELS_HPP_
#define NOISEGUARD_KERNELS_HPP_

// Data-parallel inner loops of the scoring pipeline. Every kernel has a
// straightforward serial reference in kernels::serial and an OpenMP version
// in kernels::omp; tests check that they agree and bench/ compares speed.
// The OpenMP versions never reduce across threads, so their output does not
// depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace noiseguard::kernels {

// Sample mean and scatter matrix sum_n (x_n - mean)(x_n - mean)^T of
// row-major samples (count x dim). scatter is dense dim x dim, row-major.
struct Moments {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> mean;
  std::vector<double> scatter;
};

// Lower-triangular factor, packed row-major: row i holds i + 1 entries.
inline std::size_t packed_index(std::size_t row, std::size_t col) {
  return row * (row + 1) / 2 + col;
}

namespace serial {

Moments moments(std::span<const double> samples, std::size_t count,
                std::size_t dim);

// out[q] = |L^{-1} (query_q - mean)|^2 for each row-major query.
void mahalanobis_batch(std::span<const double> mean,
                       std::span<const double> packed_factor,
                       std::span<const double> queries,
                       std::span<double> out);

}  // namespace serial

namespace omp {

Moments moments(std::span<const double> samples, std::size_t count,
                std::size_t dim);

void mahalanobis_batch(std::span<const double> mean,
                       std::span<const double> packed_factor,
                       std::span<const double> queries,
                       std::span<double> out);

}  // namespace omp

// Forward substitution L y = b on a packed factor, in place.
void forward_solve(std::span<const double> packed_factor, std::span<double> b);

// Threads used by the omp kernels; 0 leaves the OpenMP default.
void set_thread_count(int threads);
int thread_count();

}  // namespace noiseguard::kernels

#endif  // NOISEGUARD_KERNELS_HPP_
