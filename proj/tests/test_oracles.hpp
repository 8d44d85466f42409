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

#ifndef NOISEGUARD_TESTS_TEST_ORACLES_HPP_
#define NOISEGUARD_TESTS_TEST_ORACLES_HPP_

// Brute-force reference computations used only by tests. Each one follows
// the textbook definition and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace noiseguard::testing {

// O(P*N) pairwise AUC with half credit for ties.
inline double brute_force_auc(const std::vector<double>& scores,
                              const std::vector<bool>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

struct OraclePrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline OraclePrf oracle_prf(double overlap, double cand, double ref) {
  OraclePrf p;
  if (cand == 0.0 || ref == 0.0) return p;
  p.precision = overlap / cand;
  p.recall = overlap / ref;
  if (p.precision + p.recall > 0.0) {
    p.f1 = 2.0 * p.precision * p.recall / (p.precision + p.recall);
  }
  return p;
}

// ROUGE-N via n-gram count maps.
inline OraclePrf oracle_rouge_n(const std::vector<std::string>& cand,
                                const std::vector<std::string>& ref,
                                std::size_t n) {
  auto count = [n](const std::vector<std::string>& toks) {
    std::map<std::vector<std::string>, int> m;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      m[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)]++;
    }
    return m;
  };
  const auto cm = count(cand);
  const auto rm = count(ref);
  double overlap = 0.0, ct = 0.0, rt = 0.0;
  for (const auto& [g, c] : cm) {
    ct += c;
    auto it = rm.find(g);
    if (it != rm.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : rm) rt += c;
  return oracle_prf(overlap, ct, rt);
}

// Full-table LCS.
inline std::size_t oracle_lcs(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1
                                     : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

// Gauss-Jordan inverse with partial pivoting, dense row-major.
inline std::vector<double> invert(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(inv[col * n + c], inv[pivot * n + c]);
    }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

// Direct quadratic form (z - mu)^T A (z - mu) with A = cov^{-1}.
inline double quadratic_form(const std::vector<double>& inverse,
                             const std::vector<double>& mu,
                             const std::vector<double>& z) {
  const std::size_t n = mu.size();
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q += (z[i] - mu[i]) * inverse[i * n + j] * (z[j] - mu[j]);
    }
  }
  return q;
}

// Unbiased sample covariance + eps*I, two-pass.
inline std::vector<double> sample_covariance(
    const std::vector<std::vector<double>>& xs, double eps,
    std::vector<double>* mean_out) {
  const std::size_t n = xs.size(), d = xs[0].size();
  std::vector<double> mean(d, 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < d; ++i) mean[i] += x[i] / static_cast<double>(n);
  std::vector<double> cov(d * d, 0.0);
  for (const auto& x : xs)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        cov[i * d + j] += (x[i] - mean[i]) * (x[j] - mean[j]) /
                          static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) cov[i * d + i] += eps;
  if (mean_out) *mean_out = mean;
  return cov;
}

}  // namespace noiseguard::testing

#endif  // NOISEGUARD_TESTS_TEST_ORACLES_HPP_
