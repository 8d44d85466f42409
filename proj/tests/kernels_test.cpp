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

#include "noiseguard/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "noiseguard/error.hpp"
#include "noiseguard/oodstat.hpp"
#include "noiseguard/rng.hpp"
#include "test_oracles.hpp"

namespace noiseguard::kernels {
namespace {

std::vector<double> random_samples(SplitMix64& rng, std::size_t n,
                                   std::size_t d) {
  std::vector<double> out(n * d);
  for (auto& v : out) v = 4.0 * rng.unit() - 2.0;
  return out;
}

TEST(MomentsTest, SmallExample) {
  const std::vector<double> xs = {0, 0, 2, 0, 0, 2, 2, 2};
  const auto m = serial::moments(xs, 4, 2);
  EXPECT_EQ(m.mean, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(m.scatter, (std::vector<double>{4.0, 0.0, 0.0, 4.0}));
  EXPECT_THROW(serial::moments(xs, 3, 2), DataError);
  EXPECT_THROW(omp::moments(xs, 3, 2), DataError);
}

TEST(MomentsTest, ParallelMatchesSerial) {
  SplitMix64 rng(1);
  for (int threads : {1, 2, 4}) {
    set_thread_count(threads);
    for (std::size_t n : {1u, 2u, 17u, 300u}) {
      const std::size_t d = 1 + rng.uniform(40);
      const auto xs = random_samples(rng, n, d);
      const auto a = serial::moments(xs, n, d);
      const auto b = omp::moments(xs, n, d);
      ASSERT_EQ(a.count, b.count);
      ASSERT_EQ(a.mean, b.mean);
      ASSERT_EQ(a.scatter, b.scatter);
    }
  }
  set_thread_count(0);
}

TEST(ForwardSolveTest, LowerTriangular) {
  // L = [[2,0,0],[1,1,0],[0,3,3]] packed row-major.
  const std::vector<double> factor = {2, 1, 1, 0, 3, 3};
  std::vector<double> b = {4, 3, 9};
  forward_solve(factor, b);
  EXPECT_EQ(b, (std::vector<double>{2.0, 1.0, 2.0}));
}

TEST(MahalanobisBatchTest, ParallelMatchesSerialAndOracle) {
  SplitMix64 rng(9);
  const std::size_t n = 60, d = 6, q = 40;
  const auto xs = random_samples(rng, n, d);
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].assign(xs.begin() + i * d, xs.begin() + (i + 1) * d);
  }
  const auto model = ood::fit_gaussian(rows);
  std::vector<double> mu;
  const auto cov = testing::sample_covariance(rows, model.epsilon(), &mu);
  const auto inv = testing::invert(cov, d);

  const auto queries = random_samples(rng, q, d);
  std::vector<double> a(q), b(q);
  serial::mahalanobis_batch(model.mean(), model.factor(), queries, a);
  for (int threads : {1, 3}) {
    set_thread_count(threads);
    omp::mahalanobis_batch(model.mean(), model.factor(), queries, b);
    for (std::size_t i = 0; i < q; ++i) {
      ASSERT_EQ(a[i], b[i]);
      const std::vector<double> z(queries.begin() + i * d,
                                  queries.begin() + (i + 1) * d);
      ASSERT_NEAR(a[i], testing::quadratic_form(inv, mu, z),
                  1e-9 * std::max(1.0, a[i]));
    }
  }
  set_thread_count(0);
}

TEST(ThreadCountTest, SetAndReset) {
  set_thread_count(2);
  EXPECT_EQ(thread_count(), 2);
  set_thread_count(0);
  EXPECT_GE(thread_count(), 1);
}

}  // namespace
}  // namespace noiseguard::kernels
