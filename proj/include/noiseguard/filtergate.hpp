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

#ifndef NOISEGUARD_FILTERGATE_HPP_
#define NOISEGUARD_FILTERGATE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noiseguard/embedhub.hpp"
#include "noiseguard/oodstat.hpp"
#include "noiseguard/textcore.hpp"

namespace noiseguard::filter {

enum class Strategy { kFixed, kCleanPercentile, kOptimalF1 };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

// Summary statistics of the scores a threshold was calibrated on.
struct Fingerprint {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance

  bool operator==(const Fingerprint&) const = default;
};

struct ThresholdSpec {
  Strategy strategy = Strategy::kFixed;
  double value = 0.0;        // fixed threshold
  double percentile = 99.0;  // q in (0, 100]
  std::optional<double> resolved;
  Fingerprint fingerprint;

  static ThresholdSpec fixed(double value);
  static ThresholdSpec clean_percentile(double q);
  static ThresholdSpec optimal_f1();

  bool operator==(const ThresholdSpec&) const = default;
};

// Labelled validation scores for the optimal-F1 strategy.
struct LabeledScores {
  std::vector<double> scores;
  std::vector<bool> labels;  // true = noise
};

// Nearest-rank percentile: the ceil(q * n / 100)-th smallest value.
double nearest_rank_percentile(std::span<const double> values, double q);

// Threshold among midpoints of adjacent distinct scores that maximizes the
// F1 of (score > threshold) against labels; ties go to the smaller one.
struct F1Choice {
  double threshold = 0.0;
  double f1 = 0.0;
};
F1Choice optimal_f1_threshold(const LabeledScores& validation);

// Resolves spec. clean_scores feed the percentile strategy; validation is
// required for optimal_f1. Throws DataError for empty inputs.
ThresholdSpec calibrate_threshold(std::span<const double> clean_scores,
                                  ThresholdSpec spec,
                                  const LabeledScores* validation = nullptr);

struct FilterResult {
  text::Document document;
  std::vector<std::size_t> kept_sentences;  // indices into the input
  std::size_t removed_sentences = 0;
  bool emptied = false;  // every sentence was removed
};

// Drops sentences scoring strictly above `threshold` and joins the rest with
// single spaces. Noise spans are carried over by byte-range mapping.
FilterResult apply_filter(const text::Document& doc,
                          const ood::ScoreSet& scores, double threshold);

struct MaskedEmbeddings {
  embed::EmbeddingMatrix matrix;
  std::vector<std::size_t> index_map;  // row -> original token index
};

// Rows of the clean tokens only, in order.
MaskedEmbeddings mask_embeddings(const embed::EmbeddingMatrix& emb,
                                 const text::Document& doc);

// key=value text record: strategy, parameter, resolved value, fingerprint.
std::string serialize_threshold(const ThresholdSpec& spec);
ThresholdSpec parse_threshold(std::string_view contents);
void write_threshold(const ThresholdSpec& spec,
                     const std::filesystem::path& path);
ThresholdSpec read_threshold(const std::filesystem::path& path);

}  // namespace noiseguard::filter

#endif  // NOISEGUARD_FILTERGATE_HPP_
