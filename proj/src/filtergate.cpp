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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "noiseguard/error.hpp"

namespace noiseguard::filter {
namespace {

Fingerprint fingerprint_of(std::span<const double> values) {
  Fingerprint fp;
  fp.count = values.size();
  if (values.empty()) return fp;
  fp.mean = std::accumulate(values.begin(), values.end(), 0.0) /
            static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - fp.mean) * (v - fp.mean);
  fp.variance = ss / static_cast<double>(values.size());
  return fp;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError("threshold field '" + std::string(key) +
                    "' is not a number: " + std::string(s));
  }
  return v;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kFixed:
      return "fixed";
    case Strategy::kCleanPercentile:
      return "clean_percentile";
    case Strategy::kOptimalF1:
      return "optimal_f1";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "fixed") return Strategy::kFixed;
  if (name == "clean_percentile" || name == "percentile") {
    return Strategy::kCleanPercentile;
  }
  if (name == "optimal_f1") return Strategy::kOptimalF1;
  throw UsageError("unknown threshold strategy '" + std::string(name) + "'");
}

ThresholdSpec ThresholdSpec::fixed(double value) {
  ThresholdSpec spec;
  spec.strategy = Strategy::kFixed;
  spec.value = value;
  return spec;
}

ThresholdSpec ThresholdSpec::clean_percentile(double q) {
  ThresholdSpec spec;
  spec.strategy = Strategy::kCleanPercentile;
  spec.percentile = q;
  return spec;
}

ThresholdSpec ThresholdSpec::optimal_f1() {
  ThresholdSpec spec;
  spec.strategy = Strategy::kOptimalF1;
  return spec;
}

double nearest_rank_percentile(std::span<const double> values, double q) {
  if (values.empty()) throw DataError("percentile of an empty score list");
  if (!(q > 0.0 && q <= 100.0)) {
    throw UsageError("percentile must lie in (0, 100]");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double position = q * n / 100.0;
  // Snap products like 99.9 * 1000 / 100 that land a rounding error above an
  // integer, so the rank is not pushed up by one.
  if (const double nearest = std::round(position);
      std::abs(position - nearest) <= 1e-9 * std::max(1.0, position)) {
    position = nearest;
  }
  auto rank = static_cast<std::size_t>(std::ceil(position));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

F1Choice optimal_f1_threshold(const LabeledScores& validation) {
  const auto& scores = validation.scores;
  const auto& labels = validation.labels;
  if (scores.size() != labels.size()) {
    throw DataError("validation scores and labels differ in length");
  }
  const auto positives = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), true));
  if (positives == 0) {
    throw DataError("optimal-F1 calibration needs noise-labelled validation "
                    "data");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  const std::size_t negatives = scores.size() - positives;
  std::size_t pos_below = 0;
  std::size_t neg_below = 0;
  std::optional<F1Choice> best;
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = scores[order[i]];
    while (i < order.size() && scores[order[i]] == v) {
      (labels[order[i]] ? pos_below : neg_below) += 1;
      ++i;
    }
    if (i == order.size()) break;
    const double theta = v + (scores[order[i]] - v) / 2.0;
    const double tp = static_cast<double>(positives - pos_below);
    const double fp = static_cast<double>(negatives - neg_below);
    const double fn = static_cast<double>(pos_below);
    const double f1 = tp == 0.0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
    if (!best || f1 > best->f1) best = F1Choice{theta, f1};
  }
  if (!best) {
    throw DataError("optimal-F1 calibration needs at least two distinct "
                    "validation scores");
  }
  return *best;
}

ThresholdSpec calibrate_threshold(std::span<const double> clean_scores,
                                  ThresholdSpec spec,
                                  const LabeledScores* validation) {
  switch (spec.strategy) {
    case Strategy::kFixed:
      spec.resolved = spec.value;
      spec.fingerprint = fingerprint_of(clean_scores);
      break;
    case Strategy::kCleanPercentile:
      spec.resolved = nearest_rank_percentile(clean_scores, spec.percentile);
      spec.fingerprint = fingerprint_of(clean_scores);
      break;
    case Strategy::kOptimalF1:
      if (validation == nullptr) {
        throw DataError("optimal-F1 calibration needs labelled validation "
                        "scores");
      }
      spec.resolved = optimal_f1_threshold(*validation).threshold;
      spec.fingerprint = fingerprint_of(validation->scores);
      break;
  }
  return spec;
}

FilterResult apply_filter(const text::Document& doc,
                          const ood::ScoreSet& scores, double threshold) {
  ood::check_aligned(scores, doc);
  FilterResult result;
  for (std::size_t s = 0; s < doc.sentence_count(); ++s) {
    if (scores.sentence_scores[s] > threshold) {
      ++result.removed_sentences;
    } else {
      result.kept_sentences.push_back(s);
    }
  }
  if (result.removed_sentences == 0) {
    result.document = doc;
    return result;
  }

  std::string joined;
  std::optional<std::vector<text::NoiseSpan>> spans;
  if (doc.noise_spans()) spans.emplace();
  for (std::size_t s : result.kept_sentences) {
    if (!joined.empty()) joined += ' ';
    const auto range = doc.sentence_chars(s);
    const std::size_t base = joined.size();
    joined += doc.sentence_text(s);
    if (!spans) continue;
    for (const auto& n : *doc.noise_spans()) {
      const std::size_t lo = std::max(n.begin, range.begin);
      const std::size_t hi = std::min(n.end, range.end);
      if (lo < hi) {
        spans->push_back(
            {base + (lo - range.begin), base + (hi - range.begin), n.kind});
      }
    }
  }
  result.emptied = result.kept_sentences.empty();
  result.document = text::Document::build(doc.id(), std::move(joined),
                                          doc.summary(), std::move(spans));
  return result;
}

MaskedEmbeddings mask_embeddings(const embed::EmbeddingMatrix& emb,
                                 const text::Document& doc) {
  if (emb.rows() != doc.token_count()) {
    throw DataError("embeddings for '" + doc.id() + "' do not align with the "
                    "document");
  }
  MaskedEmbeddings out;
  std::vector<float> values;
  for (std::size_t k = 0; k < doc.token_count(); ++k) {
    if (doc.tokens()[k].is_noise) continue;
    out.index_map.push_back(k);
    const auto row = emb.row(k);
    values.insert(values.end(), row.begin(), row.end());
  }
  out.matrix = values.empty()
                   ? embed::EmbeddingMatrix(emb.doc_id(), emb.dim(), 0)
                   : embed::EmbeddingMatrix(emb.doc_id(), emb.dim(),
                                            std::move(values));
  return out;
}

std::string serialize_threshold(const ThresholdSpec& spec) {
  std::ostringstream out;
  out << "strategy=" << to_string(spec.strategy) << '\n';
  switch (spec.strategy) {
    case Strategy::kFixed:
      out << "value=" << format_double(spec.value) << '\n';
      break;
    case Strategy::kCleanPercentile:
      out << "percentile=" << format_double(spec.percentile) << '\n';
      break;
    case Strategy::kOptimalF1:
      break;
  }
  if (spec.resolved) out << "resolved=" << format_double(*spec.resolved) << '\n';
  out << "count=" << spec.fingerprint.count << '\n';
  out << "mean=" << format_double(spec.fingerprint.mean) << '\n';
  out << "variance=" << format_double(spec.fingerprint.variance) << '\n';
  return out.str();
}

ThresholdSpec parse_threshold(std::string_view contents) {
  std::map<std::string, std::string, std::less<>> fields;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    auto line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("threshold line without '=': " + std::string(line));
    }
    fields[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  auto get = [&](std::string_view key) -> const std::string* {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  const auto* strategy = get("strategy");
  if (strategy == nullptr) throw DataError("threshold record has no strategy");
  ThresholdSpec spec;
  try {
    spec.strategy = parse_strategy(*strategy);
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  if (const auto* v = get("value")) spec.value = parse_double(*v, "value");
  if (const auto* v = get("percentile")) {
    spec.percentile = parse_double(*v, "percentile");
  }
  if (const auto* v = get("resolved")) {
    spec.resolved = parse_double(*v, "resolved");
  }
  if (const auto* v = get("count")) {
    spec.fingerprint.count =
        static_cast<std::size_t>(parse_double(*v, "count"));
  }
  if (const auto* v = get("mean")) {
    spec.fingerprint.mean = parse_double(*v, "mean");
  }
  if (const auto* v = get("variance")) {
    spec.fingerprint.variance = parse_double(*v, "variance");
  }
  return spec;
}

void write_threshold(const ThresholdSpec& spec,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write threshold " + path.string());
  out << serialize_threshold(spec);
}

ThresholdSpec read_threshold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open threshold " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_threshold(buffer.str());
}

}  // namespace noiseguard::filter
