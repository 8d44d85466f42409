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

#include "noiseguard/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "noiseguard/error.hpp"

namespace noiseguard::eval {
namespace {

Prf make_prf(std::size_t overlap, std::size_t candidate_total,
             std::size_t reference_total) {
  Prf out;
  if (candidate_total == 0 || reference_total == 0) return out;
  out.precision =
      static_cast<double>(overlap) / static_cast<double>(candidate_total);
  out.recall = static_cast<double>(overlap) / static_cast<double>(reference_total);
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens,
                                std::size_t n) {
  std::vector<std::string> out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += ' ';
      key += tokens[i + j];
    }
    out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Multiset intersection size of two sorted lists.
std::size_t sorted_overlap(const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  std::size_t i = 0, j = 0, overlap = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++overlap;
      ++i;
      ++j;
    }
  }
  return overlap;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row.back();
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

AucCounts roc_auc_counts(std::span<const double> scores,
                         const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw DataError("scores and labels differ in length");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::uint64_t positives = 0;
  std::uint64_t negatives_below = 0;
  AucCounts counts;
  std::size_t i = 0;
  while (i < order.size()) {
    std::uint64_t pos = 0, neg = 0;
    const double v = scores[order[i]];
    while (i < order.size() && scores[order[i]] == v) {
      (labels[order[i]] ? pos : neg) += 1;
      ++i;
    }
    counts.twice_wins += pos * (2 * negatives_below + neg);
    negatives_below += neg;
    positives += pos;
  }
  if (positives == 0 || negatives_below == 0) {
    throw DataError("AUC needs both positive and negative labels");
  }
  counts.pairs = positives * negatives_below;
  return counts;
}

double roc_auc(std::span<const double> scores,
               const std::vector<bool>& labels) {
  return roc_auc_counts(scores, labels).auc();
}

PrecisionRecall precision_recall(std::span<const double> scores,
                                 const std::vector<bool>& labels,
                                 double threshold) {
  if (scores.size() != labels.size()) {
    throw DataError("scores and labels differ in length");
  }
  PrecisionRecall pr;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    if (predicted && labels[i]) ++pr.true_positives;
    if (predicted && !labels[i]) ++pr.false_positives;
    if (!predicted && labels[i]) ++pr.false_negatives;
  }
  const auto tp = static_cast<double>(pr.true_positives);
  if (pr.true_positives + pr.false_positives > 0) {
    pr.precision = tp / static_cast<double>(pr.true_positives +
                                            pr.false_positives);
  }
  if (pr.true_positives + pr.false_negatives > 0) {
    pr.recall = tp / static_cast<double>(pr.true_positives +
                                         pr.false_negatives);
  }
  if (pr.precision + pr.recall > 0.0) {
    pr.f1 = 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
  }
  return pr;
}

DetectionReport detection_report(std::span<const ood::ScoreSet> score_sets,
                                 std::span<const text::Document> docs,
                                 double threshold) {
  if (score_sets.size() != docs.size()) {
    throw DataError("score sets and documents differ in count");
  }
  DetectionReport report;
  report.threshold = threshold;
  std::vector<double> pooled_scores;
  std::vector<bool> pooled_labels;
  double auc_sum = 0.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ood::check_aligned(score_sets[i], docs[i]);
    const auto labels = docs[i].noise_labels();
    const auto& scores = score_sets[i].token_scores;
    pooled_scores.insert(pooled_scores.end(), scores.begin(), scores.end());
    pooled_labels.insert(pooled_labels.end(), labels.begin(), labels.end());
    const auto noisy = std::count(labels.begin(), labels.end(), true);
    if (noisy == 0 || static_cast<std::size_t>(noisy) == labels.size()) {
      ++report.skipped_examples;
      continue;
    }
    auc_sum += roc_auc(scores, labels);
    ++report.scored_examples;
  }
  if (report.scored_examples == 0) {
    throw DataError("no document has both clean and noisy tokens");
  }
  report.per_example_auc = auc_sum / static_cast<double>(report.scored_examples);
  report.overall_auc = roc_auc(pooled_scores, pooled_labels);
  report.at_threshold = precision_recall(pooled_scores, pooled_labels, threshold);
  return report;
}

std::vector<std::string> rouge_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if ((u >= 'a' && u <= 'z') || (u >= '0' && u <= '9')) {
      current += c;
    } else if (u >= 'A' && u <= 'Z') {
      current += static_cast<char>(u - 'A' + 'a');
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double geometric_mean(double a, double b, double c) {
  if (a <= 0.0 || b <= 0.0 || c <= 0.0) return 0.0;
  return std::cbrt(a * b * c);
}

RougeScores rouge_tokens(const std::vector<std::string>& candidate,
                         const std::vector<std::string>& reference) {
  RougeScores out;
  const auto c1 = ngrams(candidate, 1), r1 = ngrams(reference, 1);
  out.r1 = make_prf(sorted_overlap(c1, r1), c1.size(), r1.size());
  const auto c2 = ngrams(candidate, 2), r2 = ngrams(reference, 2);
  out.r2 = make_prf(sorted_overlap(c2, r2), c2.size(), r2.size());
  out.rl = make_prf(lcs_length(candidate, reference), candidate.size(),
                    reference.size());
  out.geometric_mean_f1 = geometric_mean(out.r1.f1, out.r2.f1, out.rl.f1);
  return out;
}

RougeScores rouge(std::string_view candidate, std::string_view reference) {
  return rouge_tokens(rouge_tokenize(candidate), rouge_tokenize(reference));
}

RougeScores mean_rouge(std::span<const RougeScores> scores) {
  RougeScores mean;
  if (scores.empty()) return mean;
  auto add = [](Prf& into, const Prf& from) {
    into.precision += from.precision;
    into.recall += from.recall;
    into.f1 += from.f1;
  };
  for (const auto& s : scores) {
    add(mean.r1, s.r1);
    add(mean.r2, s.r2);
    add(mean.rl, s.rl);
  }
  const auto n = static_cast<double>(scores.size());
  for (Prf* p : {&mean.r1, &mean.r2, &mean.rl}) {
    p->precision /= n;
    p->recall /= n;
    p->f1 /= n;
  }
  mean.geometric_mean_f1 = geometric_mean(mean.r1.f1, mean.r2.f1, mean.rl.f1);
  return mean;
}

Histogram score_distribution_report(
    const std::vector<std::pair<std::string, std::vector<double>>>& groups,
    std::size_t bin_count) {
  if (bin_count == 0) throw UsageError("histogram needs at least one bin");
  if (groups.empty()) throw DataError("histogram needs at least one group");
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& [name, values] : groups) {
    if (values.empty()) throw DataError("histogram group '" + name + "' is empty");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = first ? *mn : std::min(lo, *mn);
    hi = first ? *mx : std::max(hi, *mx);
    first = false;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);

  Histogram h;
  for (std::size_t i = 0; i <= bin_count; ++i) {
    h.edges.push_back(i == bin_count ? hi : lo + width * static_cast<double>(i));
  }
  for (const auto& [name, values] : groups) {
    HistogramGroup g;
    g.name = name;
    g.size = values.size();
    g.counts.assign(bin_count, 0);
    for (double v : values) {
      std::size_t bin = 0;
      if (width > 0.0) {
        bin = static_cast<std::size_t>(std::floor((v - lo) / width));
        bin = std::min(bin, bin_count - 1);
      }
      ++g.counts[bin];
    }
    for (std::size_t c : g.counts) {
      g.fractions.push_back(static_cast<double>(c) /
                            static_cast<double>(g.size));
    }
    g.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(g.size);
    g.median = median_of(values);
    h.groups.push_back(std::move(g));
  }
  return h;
}

std::vector<SummaryCount> top_summaries(std::span<const std::string> summaries,
                                        std::size_t k) {
  if (k == 0) throw UsageError("top-k needs k >= 1");
  if (summaries.empty()) throw DataError("no summaries to count");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : summaries) ++counts[s];
  std::vector<SummaryCount> rows;
  rows.reserve(counts.size());
  for (auto& [s, c] : counts) rows.push_back({s, c});
  std::sort(rows.begin(), rows.end(),
            [](const SummaryCount& a, const SummaryCount& b) {
              return a.count != b.count ? a.count > b.count
                                        : a.summary < b.summary;
            });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

}  // namespace noiseguard::eval
