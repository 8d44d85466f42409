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

#include "noiseguard/error.hpp"
#include "noiseguard/kernels.hpp"

namespace noiseguard::kernels {

void forward_solve(std::span<const double> packed_factor, std::span<double> b) {
  const std::size_t dim = b.size();
  for (std::size_t i = 0; i < dim; ++i) {
    const double* row = packed_factor.data() + packed_index(i, 0);
    double acc = b[i];
    for (std::size_t j = 0; j < i; ++j) acc -= row[j] * b[j];
    b[i] = acc / row[i];
  }
}

namespace serial {

Moments moments(std::span<const double> samples, std::size_t count,
                std::size_t dim) {
  if (samples.size() != count * dim) {
    throw DataError("sample buffer does not match count x dim");
  }
  Moments m{count, dim, std::vector<double>(dim, 0.0),
            std::vector<double>(dim * dim, 0.0)};
  if (count == 0) return m;
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t d = 0; d < dim; ++d) m.mean[d] += samples[n * dim + d];
  }
  for (auto& v : m.mean) v /= static_cast<double>(count);

  std::vector<double> centered(dim);
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t d = 0; d < dim; ++d) {
      centered[d] = samples[n * dim + d] - m.mean[d];
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        m.scatter[i * dim + j] += centered[i] * centered[j];
      }
    }
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
  std::vector<double> y(dim);
  for (std::size_t q = 0; q < out.size(); ++q) {
    for (std::size_t d = 0; d < dim; ++d) y[d] = queries[q * dim + d] - mean[d];
    forward_solve(packed_factor, y);
    double md = 0.0;
    for (double v : y) md += v * v;
    out[q] = md;
  }
}

}  // namespace serial
}  // namespace noiseguard::kernels
