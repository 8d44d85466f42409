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

#include "noiseguard/filtergate.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "noiseguard/error.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::filter {
namespace {

using text::Document;

constexpr double kInf = std::numeric_limits<double>::infinity();

ood::ScoreSet sentence_scores(const Document& doc, std::vector<double> s) {
  ood::ScoreSet set{doc.id(), ood::Method::kSent, std::move(s),
                    std::vector<double>(doc.token_count())};
  for (std::size_t k = 0; k < doc.token_count(); ++k) {
    set.token_scores[k] = set.sentence_scores[doc.token_sentence_index()[k]];
  }
  return set;
}

TEST(PercentileTest, NearestRank) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[i] = 100 - i;
  EXPECT_EQ(nearest_rank_percentile(v, 99), 99.0);
  EXPECT_EQ(nearest_rank_percentile(v, 100), 100.0);
  EXPECT_EQ(nearest_rank_percentile(v, 95), 95.0);
  EXPECT_EQ(nearest_rank_percentile(v, 0.5), 1.0);
  EXPECT_EQ(nearest_rank_percentile(std::vector<double>{3, 1, 2}, 50), 2.0);
  EXPECT_EQ(nearest_rank_percentile(std::vector<double>{7}, 1), 7.0);
  EXPECT_THROW(nearest_rank_percentile(std::vector<double>{}, 99), DataError);
  EXPECT_THROW(nearest_rank_percentile(v, 0), UsageError);
  EXPECT_THROW(nearest_rank_percentile(v, 100.5), UsageError);
}

TEST(PercentileTest, FractionalRanksRoundUp) {
  // 10 values, q = 99 -> rank ceil(9.9) = 10; q = 10 -> rank 1.
  std::vector<double> v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_EQ(nearest_rank_percentile(v, 99), 9.0);
  EXPECT_EQ(nearest_rank_percentile(v, 10), 0.0);
  EXPECT_EQ(nearest_rank_percentile(v, 10.01), 1.0);
  EXPECT_EQ(nearest_rank_percentile(v, 70), 6.0);
}

TEST(OptimalF1Test, SeparableGivesMidpoint) {
  LabeledScores v{{10, 10, -10, -10, -10}, {true, true, false, false, false}};
  const auto choice = optimal_f1_threshold(v);
  EXPECT_EQ(choice.threshold, 0.0);
  EXPECT_EQ(choice.f1, 1.0);
}

TEST(OptimalF1Test, MatchesExhaustiveSearch) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    LabeledScores v;
    const auto n = 3 + rng.uniform(40);
    for (std::uint64_t i = 0; i < n; ++i) {
      v.scores.push_back(static_cast<double>(rng.uniform(12)));
      v.labels.push_back(rng.uniform(3) == 0);
    }
    v.labels[0] = true;
    v.scores[1] = v.scores[0] + 1.0;
    std::vector<double> sorted = v.scores;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    double best_f1 = -1.0, best_theta = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const double theta = (sorted[i] + sorted[i + 1]) / 2.0;
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const bool pred = v.scores[k] > theta;
        tp += pred && v.labels[k];
        fp += pred && !v.labels[k];
        fn += !pred && v.labels[k];
      }
      const double f1 = tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
      if (f1 > best_f1) {
        best_f1 = f1;
        best_theta = theta;
      }
    }
    const auto got = optimal_f1_threshold(v);
    ASSERT_EQ(got.threshold, best_theta);
    ASSERT_NEAR(got.f1, best_f1, 1e-12);
  }
}

TEST(OptimalF1Test, Errors) {
  EXPECT_THROW(optimal_f1_threshold({{1, 2}, {false, false}}), DataError);
  EXPECT_THROW(optimal_f1_threshold({{1, 1}, {true, false}}), DataError);
  EXPECT_THROW(optimal_f1_threshold({{1, 2}, {true}}), DataError);
}

TEST(CalibrateTest, Strategies) {
  const std::vector<double> clean = {1, 2, 3, 4};
  const auto fixed = calibrate_threshold(clean, ThresholdSpec::fixed(0));
  EXPECT_EQ(fixed.resolved, 0.0);
  const auto pct = calibrate_threshold(clean, ThresholdSpec::clean_percentile(50));
  EXPECT_EQ(pct.resolved, 2.0);
  EXPECT_EQ(pct.fingerprint.count, 4u);
  EXPECT_EQ(pct.fingerprint.mean, 2.5);
  EXPECT_EQ(pct.fingerprint.variance, 1.25);
  EXPECT_THROW(calibrate_threshold(clean, ThresholdSpec::optimal_f1()), DataError);
  LabeledScores v{{5, -5}, {true, false}};
  EXPECT_EQ(calibrate_threshold({}, ThresholdSpec::optimal_f1(), &v).resolved, 0.0);
  EXPECT_THROW(calibrate_threshold({}, ThresholdSpec::clean_percentile(99)),
               DataError);
}

TEST(ThresholdIoTest, RoundTrip) {
  for (auto spec : {ThresholdSpec::fixed(200), ThresholdSpec::clean_percentile(95),
                    ThresholdSpec::optimal_f1()}) {
    LabeledScores v{{0.1, 0.7, 1.0 / 3.0}, {false, true, false}};
    spec = calibrate_threshold(std::vector<double>{0.1, 1.0 / 3.0, 0.7}, spec, &v);
    EXPECT_EQ(parse_threshold(serialize_threshold(spec)), spec);
  }
  const auto file = std::filesystem::temp_directory_path() / "ng_threshold.txt";
  const auto spec = ThresholdSpec::fixed(-0.125);
  write_threshold(spec, file);
  EXPECT_EQ(read_threshold(file), spec);
  std::filesystem::remove(file);
  EXPECT_EQ(parse_strategy("percentile"), Strategy::kCleanPercentile);
  EXPECT_THROW(parse_threshold("value=1\n"), DataError);
  EXPECT_THROW(parse_threshold("strategy=fixed\nvalue=abc\n"), DataError);
  EXPECT_THROW(parse_threshold("strategy\n"), DataError);
  EXPECT_THROW(parse_strategy("median"), UsageError);
}

TEST(ApplyFilterTest, StrictComparison) {
  const auto doc = Document::build("d", "One a. Two b. Three c.");
  const auto r = apply_filter(doc, sentence_scores(doc, {5, -3, 7}), 4);
  EXPECT_EQ(r.document.text(), "Two b.");
  EXPECT_EQ(r.kept_sentences, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.removed_sentences, 2u);
  EXPECT_FALSE(r.emptied);
  const auto at = apply_filter(doc, sentence_scores(doc, {4, 4, 4}), 4);
  EXPECT_EQ(at.document.text(), doc.text());
}

TEST(ApplyFilterTest, InfiniteThresholds) {
  const auto doc = Document::build("d", "  One a.\n\nTwo  b!  ", std::string("s"),
                                   std::vector<text::NoiseSpan>{{2, 5, "code"}});
  const auto scores = sentence_scores(doc, {1e300, -1e300});
  const auto keep = apply_filter(doc, scores, kInf);
  EXPECT_EQ(keep.document, doc);
  EXPECT_EQ(keep.removed_sentences, 0u);
  const auto drop = apply_filter(doc, scores, -kInf);
  EXPECT_TRUE(drop.emptied);
  EXPECT_EQ(drop.document.text(), "");
  EXPECT_EQ(drop.document.token_count(), 0u);
  EXPECT_EQ(drop.document.summary(), "s");
  ASSERT_TRUE(drop.document.noise_spans().has_value());
  EXPECT_TRUE(drop.document.noise_spans()->empty());
}

TEST(ApplyFilterTest, NoiseSpansFollowKeptText) {
  const std::string text = "Keep me. x = 1 Gone now. Also keep x.";
  // Noise "x = 1" lies inside sentence 1, which also holds "Gone now.".
  const auto doc = Document::build("d", text, std::nullopt,
                                   std::vector<text::NoiseSpan>{{9, 14, "code"}});
  ASSERT_EQ(doc.sentence_count(), 3u);
  const auto r = apply_filter(doc, sentence_scores(doc, {0, 9, 0}), 1);
  EXPECT_EQ(r.document.text(), "Keep me. Also keep x.");
  EXPECT_TRUE(r.document.noise_spans()->empty());
  const auto k = apply_filter(doc, sentence_scores(doc, {9, 0, 0}), 1);
  EXPECT_EQ(k.document.text(), "x = 1 Gone now. Also keep x.");
  ASSERT_EQ(k.document.noise_spans()->size(), 1u);
  EXPECT_EQ(k.document.noise_spans()->at(0).begin, 0u);
  EXPECT_EQ(k.document.noise_spans()->at(0).end, 5u);
  EXPECT_EQ(k.document.noise_labels(),
            (std::vector<bool>{true, true, true, false, false, false, false,
                               false}));
}

TEST(ApplyFilterTest, Misaligned) {
  const auto doc = Document::build("d", "a. b.");
  EXPECT_THROW(apply_filter(doc, sentence_scores(Document::build("d", "a."), {1}), 0),
               DataError);
  EXPECT_THROW(apply_filter(doc, sentence_scores(Document::build("e", "a. b."), {1, 2}), 0),
               DataError);
}

TEST(ApplyFilterPropertyTest, MonotoneAndIdempotent) {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const auto n = 1 + rng.uniform(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      text += "s" + std::to_string(i) + " w" + std::to_string(rng.uniform(9)) + ". ";
    }
    const auto doc = Document::build("p", text);
    std::vector<double> s(doc.sentence_count());
    for (auto& v : s) v = 10.0 * rng.unit() - 5.0;
    const auto scores = sentence_scores(doc, s);
    std::size_t previous = 0;
    for (double theta = -6.0; theta <= 6.0; theta += 0.5) {
      const auto r = apply_filter(doc, scores, theta);
      ASSERT_GE(r.kept_sentences.size(), previous);
      previous = r.kept_sentences.size();
      ASSERT_EQ(r.document.sentence_count(), r.kept_sentences.size());
      for (std::size_t i = 0; i < r.kept_sentences.size(); ++i) {
        ASSERT_EQ(r.document.sentence_text(i),
                  doc.sentence_text(r.kept_sentences[i]));
      }
    }
  }
}

TEST(MaskTest, Examples) {
  const auto doc = Document::build("d", "a b c d e", std::nullopt,
                                   std::vector<text::NoiseSpan>{{2, 3, "x"}, {6, 7, "x"}});
  std::vector<float> values(10);
  for (int i = 0; i < 10; ++i) values[i] = static_cast<float>(i);
  const embed::EmbeddingMatrix emb("d", 2, values);
  const auto m = mask_embeddings(emb, doc);
  EXPECT_EQ(m.index_map, (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(m.matrix.values(), (std::vector<float>{0, 1, 4, 5, 8, 9}));

  const auto clean = Document::build("d", "a b c d e");
  EXPECT_EQ(mask_embeddings(emb, clean).matrix, emb);
  const auto all = Document::build("d", "a b", std::nullopt,
                                   std::vector<text::NoiseSpan>{{0, 3, "x"}});
  EXPECT_EQ(mask_embeddings(embed::EmbeddingMatrix("d", 2, std::vector<float>{1, 2, 3, 4}), all)
                .matrix.rows(),
            0u);
  EXPECT_THROW(mask_embeddings(emb, all), DataError);
}

}  // namespace
}  // namespace noiseguard::filter
