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

#ifndef NOISEGUARD_PIPELINE_HPP_
#define NOISEGUARD_PIPELINE_HPP_

// One function per CLI stage. Each stage reads its inputs from files,
// writes its artifacts, prints a report to `out`, and (when a manifest path
// is set) appends a manifest entry naming every input and output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "noiseguard/embedhub.hpp"
#include "noiseguard/filtergate.hpp"
#include "noiseguard/noiselab.hpp"
#include "noiseguard/oodstat.hpp"

namespace noiseguard::pipeline {

using std::filesystem::path;

enum class Format { kTable, kJsonl, kCsv };
Format parse_format(std::string_view name);

struct CommonOptions {
  std::uint64_t seed = 0;
  Format format = Format::kTable;
  int threads = 0;  // 0 = OpenMP default
  std::optional<path> manifest;
};

// Where token embeddings come from: an EMBS store, or the reference
// embedder when no store is given.
struct EmbeddingSource {
  std::optional<path> store;
  std::size_t reference_dim = 64;
  std::uint64_t reference_seed = 0;
};

std::unique_ptr<embed::EmbeddingProvider> make_provider(
    const EmbeddingSource& source);

// ---------------------------------------------------------------------------

struct InjectOptions {
  path corpus;
  path pool;
  noise::NoiseKind kind = noise::NoiseKind::kCode;
  double amount = 0.5;
  path out;
};

struct EmbedOptions {
  path corpus;
  std::size_t dim = 64;
  std::uint64_t embed_seed = 0;
  path out;
};

struct FitOptions {
  path corpus;
  path background_corpus;
  EmbeddingSource embeddings;
  EmbeddingSource background_embeddings;
  ood::FitLevel level = ood::FitLevel::kSentence;
  std::size_t cap = ood::kDefaultFitCap;
  path out_in;
  path out_bg;
};

struct ScoreOptions {
  path corpus;
  ood::Method method = ood::Method::kSent;
  ood::LeaveOutMode mode = ood::LeaveOutMode::kPooled;
  EmbeddingSource embeddings;
  std::optional<path> nll_store;
  std::optional<path> in_model;
  std::optional<path> bg_model;
  path out;
};

struct CalibrateOptions {
  path scores;  // clean-corpus score sets
  filter::Strategy strategy = filter::Strategy::kCleanPercentile;
  double value = 0.0;
  double percentile = 99.0;
  std::optional<path> validation_scores;
  std::optional<path> validation_corpus;
  path out;
};

struct FilterOptions {
  path corpus;
  std::optional<path> scores;
  std::optional<path> threshold_file;
  std::optional<double> threshold_value;
  path out;
  // Masking mode: drop ground-truth noisy rows from an EMBS store.
  std::optional<path> mask_embeddings;
};

struct EvalOptions {
  path corpus;
  std::optional<path> scores;
  std::optional<path> threshold_file;
  std::optional<double> threshold_value;
  std::optional<path> filtered;
  std::optional<path> candidates;  // JSONL {"id","summary"}
  std::optional<path> references;  // corpus with summaries; default: corpus
  std::size_t top_k = 5;
};

enum class ReportKind { kDistribution, kStore, kSummaries, kManifest };
ReportKind parse_report_kind(std::string_view name);

struct ReportOptions {
  ReportKind kind = ReportKind::kDistribution;
  // distribution
  std::optional<path> clean_corpus;
  std::optional<path> clean_scores;
  std::optional<path> noisy_corpus;
  std::optional<path> noisy_scores;
  std::size_t bins = 20;
  // store / manifest
  std::optional<path> file;
  // summaries
  std::optional<path> summaries;
  std::size_t top_k = 5;
};

void run_inject(const InjectOptions& options, const CommonOptions& common,
                std::ostream& out);
void run_embed(const EmbedOptions& options, const CommonOptions& common,
               std::ostream& out);
void run_fit(const FitOptions& options, const CommonOptions& common,
             std::ostream& out);
void run_score(const ScoreOptions& options, const CommonOptions& common,
               std::ostream& out);
void run_calibrate(const CalibrateOptions& options,
                   const CommonOptions& common, std::ostream& out);
void run_filter(const FilterOptions& options, const CommonOptions& common,
                std::ostream& out);
void run_eval(const EvalOptions& options, const CommonOptions& common,
              std::ostream& out);
void run_report(const ReportOptions& options, const CommonOptions& common,
                std::ostream& out);

// Aligns score sets to documents by id; throws DataError listing ids present
// on one side only.
std::vector<ood::ScoreSet> align_scores(const text::Corpus& corpus,
                                        std::vector<ood::ScoreSet> sets);

struct SummaryRecord {
  std::string id;
  std::string summary;
};
std::vector<SummaryRecord> read_summaries(const path& file);

// ---------------------------------------------------------------------------
// Reports

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void render(const std::vector<Table>& tables, Format format, std::ostream& out);

// ---------------------------------------------------------------------------
// Run manifest (append-only JSONL)

struct ArtifactRef {
  std::string role;
  std::string file;
  std::uint64_t bytes = 0;
  std::string fingerprint;  // FNV-1a-64 of the content, hex

  bool operator==(const ArtifactRef&) const = default;
};

struct ManifestEntry {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<ArtifactRef> inputs;
  std::vector<ArtifactRef> outputs;
  std::string version;

  bool operator==(const ManifestEntry&) const = default;
};

ArtifactRef describe_artifact(const std::string& role, const path& file);
// Throws DataError if any referenced output is missing.
void append_manifest(const path& manifest, const ManifestEntry& entry);
std::vector<ManifestEntry> read_manifest(const path& manifest);

// FNV-1a-64 of "key=value\n" lines in key order, as 16 hex digits.
std::string config_hash(std::vector<std::pair<std::string, std::string>> kv);

}  // namespace noiseguard::pipeline

#endif  // NOISEGUARD_PIPELINE_HPP_
