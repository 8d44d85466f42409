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

#ifndef NOISEGUARD_EVALKIT_HPP_
#define NOISEGUARD_EVALKIT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noiseguard/oodstat.hpp"
#include "noiseguard/textcore.hpp"

namespace noiseguard::eval {

// ---------------------------------------------------------------------------
// ROC AUC

// Pairwise counts behind an AUC: twice_wins counts 2 per correctly ordered
// positive/negative pair and 1 per tie, so AUC = twice_wins / (2 * pairs).
struct AucCounts {
  std::uint64_t twice_wins = 0;
  std::uint64_t pairs = 0;

  double auc() const {
    return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(pairs));
  }
};

// Sort-based pair counting, O(n log n). Throws DataError unless both
// classes are present.
AucCounts roc_auc_counts(std::span<const double> scores,
                         const std::vector<bool>& labels);
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

// Predictions are score > threshold. Empty denominators give 0.
PrecisionRecall precision_recall(std::span<const double> scores,
                                 const std::vector<bool>& labels,
                                 double threshold);

struct DetectionReport {
  double overall_auc = 0.0;
  double per_example_auc = 0.0;
  std::size_t scored_examples = 0;
  std::size_t skipped_examples = 0;  // documents lacking one of the classes
  double threshold = 0.0;
  PrecisionRecall at_threshold;
};

// Token-level detection quality. score_sets[i] must align with docs[i].
// Throws DataError when no document contains both clean and noisy tokens.
DetectionReport detection_report(std::span<const ood::ScoreSet> score_sets,
                                 std::span<const text::Document> docs,
                                 double threshold);

// ---------------------------------------------------------------------------
// ROUGE

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RougeScores {
  Prf r1;
  Prf r2;
  Prf rl;
  double geometric_mean_f1 = 0.0;
};

// Lowercased ASCII alphanumeric runs; everything else separates tokens.
std::vector<std::string> rouge_tokenize(std::string_view text);

// ROUGE-1, ROUGE-2 and whole-text ROUGE-L without stemming.
RougeScores rouge(std::string_view candidate, std::string_view reference);
RougeScores rouge_tokens(const std::vector<std::string>& candidate,
                         const std::vector<std::string>& reference);

// Mean of each component over pairs; geometric mean taken of the mean F1s.
RougeScores mean_rouge(std::span<const RougeScores> scores);

double geometric_mean(double a, double b, double c);

// ---------------------------------------------------------------------------
// Score distributions and summary frequencies

struct HistogramGroup {
  std::string name;
  std::vector<std::size_t> counts;
  std::vector<double> fractions;  // counts / group size
  double mean = 0.0;
  double median = 0.0;
  std::size_t size = 0;
};

struct Histogram {
  std::vector<double> edges;  // bin_count + 1 shared edges
  std::vector<HistogramGroup> groups;
};

// Equal-width bins over [min, max] of all groups combined; the maximum lands
// in the last bin. When every value is equal all of them land in bin 0.
Histogram score_distribution_report(
    const std::vector<std::pair<std::string, std::vector<double>>>& groups,
    std::size_t bin_count);

struct SummaryCount {
  std::string summary;
  std::size_t count = 0;

  bool operator==(const SummaryCount&) const = default;
};

// Exact-string counts, most frequent first, ties in lexicographic order.
std::vector<SummaryCount> top_summaries(std::span<const std::string> summaries,
                                        std::size_t k);

}  // namespace noiseguard::eval

#endif  // NOISEGUARD_EVALKIT_HPP_
