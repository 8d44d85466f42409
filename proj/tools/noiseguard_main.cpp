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

// Command-line front end: one subcommand per pipeline stage.
//
//   noiseguard inject    --corpus c.jsonl --pool code.txt --noise-kind code
//                        --noise-amount 0.5 --seed 7 --out noisy.jsonl
//   noiseguard embed     --corpus c.jsonl --dim 64 --out c.embs
//   noiseguard fit       --corpus train.jsonl --background-corpus bg.jsonl
//                        --level sentence --out-in in.gaus --out-bg bg.gaus
//   noiseguard score     --corpus noisy.jsonl --method sent --in-model in.gaus
//                        --bg-model bg.gaus --out scores.jsonl
//   noiseguard calibrate --scores clean_scores.jsonl --strategy clean_percentile
//                        --percentile 99 --out threshold.txt
//   noiseguard filter    --corpus noisy.jsonl --scores scores.jsonl
//                        --threshold threshold.txt --out filtered.jsonl
//   noiseguard eval      --corpus noisy.jsonl --scores scores.jsonl
//   noiseguard report    --kind distribution ...
//
// Exit codes: 0 ok, 2 usage, 3 data/alignment, 4 numeric failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "noiseguard/error.hpp"
#include "noiseguard/pipeline.hpp"

namespace ng = noiseguard;
namespace pl = noiseguard::pipeline;

namespace {

double parse_threshold_value(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ng::UsageError("threshold value is not a number: " + s);
  }
  return v;
}

// Embedding-source flags shared by fit and score.
void add_embedding_flags(CLI::App* cmd, pl::EmbeddingSource* source,
                         const std::string& prefix) {
  cmd->add_option("--" + prefix + "embeddings", source->store,
                  "EMBS store (default: reference embedder)");
  cmd->add_option("--" + prefix + "reference-dim", source->reference_dim,
                  "Reference embedder dimension")
      ->capture_default_str();
  cmd->add_option("--" + prefix + "embed-seed", source->reference_seed,
                  "Reference embedder seed")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noiseguard: noisy-span injection, detection and filtering"};
  app.set_config("--config", "", "Key-value config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  pl::CommonOptions common;
  std::string format = "table";
  std::string manifest;
  app.add_option("--seed", common.seed, "Global seed")->capture_default_str();
  app.add_option("--format", format, "Report format: table, jsonl or csv")
      ->check(CLI::IsMember({"table", "jsonl", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (0 = default)")
      ->capture_default_str();
  app.add_option("--manifest", manifest, "Append a run record to this file");

  // inject
  pl::InjectOptions inject;
  std::string noise_kind = "code";
  auto* inject_cmd = app.add_subcommand("inject", "Insert noisy spans");
  inject_cmd->add_option("--corpus", inject.corpus)->required();
  inject_cmd->add_option("--pool", inject.pool, "Noise pool file")->required();
  inject_cmd->add_option("--noise-kind", noise_kind)
      ->check(CLI::IsMember({"code", "emoji", "url", "randomsent"}))
      ->capture_default_str();
  inject_cmd->add_option("--noise-amount", inject.amount)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  inject_cmd->add_option("--out", inject.out)->required();

  // embed
  pl::EmbedOptions embed;
  auto* embed_cmd =
      app.add_subcommand("embed", "Write reference embeddings to an EMBS store");
  embed_cmd->add_option("--corpus", embed.corpus)->required();
  embed_cmd->add_option("--dim", embed.dim)->capture_default_str();
  embed_cmd->add_option("--embed-seed", embed.embed_seed)->capture_default_str();
  embed_cmd->add_option("--out", embed.out)->required();

  // fit
  pl::FitOptions fit;
  std::string fit_level = "sentence";
  auto* fit_cmd = app.add_subcommand("fit", "Fit in-domain and background "
                                            "Gaussians");
  fit_cmd->add_option("--corpus", fit.corpus)->required();
  fit_cmd->add_option("--background-corpus", fit.background_corpus)->required();
  add_embedding_flags(fit_cmd, &fit.embeddings, "");
  add_embedding_flags(fit_cmd, &fit.background_embeddings, "background-");
  fit_cmd->add_option("--level", fit_level)
      ->check(CLI::IsMember({"sequence", "sentence"}))
      ->capture_default_str();
  fit_cmd->add_option("--cap", fit.cap, "Documents per distribution")
      ->capture_default_str();
  fit_cmd->add_option("--out-in", fit.out_in)->required();
  fit_cmd->add_option("--out-bg", fit.out_bg)->required();

  // score
  pl::ScoreOptions score;
  std::string method = "sent", mode = "pooled";
  auto* score_cmd = app.add_subcommand("score", "Score sentences and tokens");
  score_cmd->add_option("--corpus", score.corpus)->required();
  score_cmd->add_option("--method", method)
      ->check(CLI::IsMember({"lo_tok", "lo_sent", "sent", "nll"}))
      ->capture_default_str();
  score_cmd->add_option("--mode", mode, "Leave-out mode")
      ->check(CLI::IsMember({"pooled", "reencode"}))
      ->capture_default_str();
  add_embedding_flags(score_cmd, &score.embeddings, "");
  score_cmd->add_option("--nll-store", score.nll_store);
  score_cmd->add_option("--in-model", score.in_model);
  score_cmd->add_option("--bg-model", score.bg_model);
  score_cmd->add_option("--out", score.out)->required();

  // calibrate
  pl::CalibrateOptions calibrate;
  std::string strategy = "clean_percentile";
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "Resolve a filtering threshold");
  calibrate_cmd->add_option("--scores", calibrate.scores,
                            "Score sets of the clean corpus")
      ->required();
  calibrate_cmd->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"fixed", "clean_percentile", "percentile",
                             "optimal_f1"}))
      ->capture_default_str();
  calibrate_cmd->add_option("--value", calibrate.value, "Fixed threshold");
  calibrate_cmd->add_option("--percentile", calibrate.percentile)
      ->capture_default_str();
  calibrate_cmd->add_option("--validation-scores", calibrate.validation_scores);
  calibrate_cmd->add_option("--validation-corpus", calibrate.validation_corpus);
  calibrate_cmd->add_option("--out", calibrate.out)->required();

  // filter
  pl::FilterOptions filter;
  std::string filter_threshold;
  auto* filter_cmd = app.add_subcommand(
      "filter", "Drop high-scoring sentences, or mask noisy embedding rows");
  filter_cmd->add_option("--corpus", filter.corpus)->required();
  filter_cmd->add_option("--scores", filter.scores);
  filter_cmd->add_option("--threshold", filter.threshold_file,
                         "Threshold file from calibrate");
  filter_cmd->add_option("--threshold-value", filter_threshold,
                         "Literal threshold (inf allowed)");
  filter_cmd->add_option("--mask-embeddings", filter.mask_embeddings,
                         "EMBS store to mask by ground-truth labels");
  filter_cmd->add_option("--out", filter.out)->required();

  // eval
  pl::EvalOptions eval;
  std::string eval_threshold;
  auto* eval_cmd = app.add_subcommand("eval", "Detection and summary metrics");
  eval_cmd->add_option("--corpus", eval.corpus)->required();
  eval_cmd->add_option("--scores", eval.scores);
  eval_cmd->add_option("--threshold", eval.threshold_file);
  eval_cmd->add_option("--threshold-value", eval_threshold);
  eval_cmd->add_option("--filtered", eval.filtered);
  eval_cmd->add_option("--candidates", eval.candidates,
                       "Generated summaries, JSONL {id, summary}");
  eval_cmd->add_option("--references", eval.references);
  eval_cmd->add_option("--top-k", eval.top_k)->capture_default_str();

  // report
  pl::ReportOptions report;
  std::string report_kind = "distribution";
  auto* report_cmd = app.add_subcommand("report", "Score distributions, "
                                                  "store checks, summaries");
  report_cmd->add_option("--kind", report_kind)
      ->check(CLI::IsMember({"distribution", "store", "summaries", "manifest"}))
      ->capture_default_str();
  report_cmd->add_option("--clean-corpus", report.clean_corpus);
  report_cmd->add_option("--clean-scores", report.clean_scores);
  report_cmd->add_option("--noisy-corpus", report.noisy_corpus);
  report_cmd->add_option("--noisy-scores", report.noisy_scores);
  report_cmd->add_option("--bins", report.bins)->capture_default_str();
  report_cmd->add_option("--file", report.file);
  report_cmd->add_option("--summaries", report.summaries);
  report_cmd->add_option("--top-k", report.top_k)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ng::ErrorKind::kUsage);
  }

  try {
    common.format = pl::parse_format(format);
    if (!manifest.empty()) common.manifest = manifest;

    if (*inject_cmd) {
      inject.kind = ng::noise::parse_noise_kind(noise_kind);
      pl::run_inject(inject, common, std::cout);
    } else if (*embed_cmd) {
      pl::run_embed(embed, common, std::cout);
    } else if (*fit_cmd) {
      fit.level = ng::ood::parse_fit_level(fit_level);
      // Background reference settings default to the in-domain ones.
      if (fit_cmd->count("--background-reference-dim") == 0) {
        fit.background_embeddings.reference_dim = fit.embeddings.reference_dim;
      }
      if (fit_cmd->count("--background-embed-seed") == 0) {
        fit.background_embeddings.reference_seed = fit.embeddings.reference_seed;
      }
      pl::run_fit(fit, common, std::cout);
    } else if (*score_cmd) {
      score.method = ng::ood::parse_method(method);
      score.mode = ng::ood::parse_leave_out_mode(mode);
      pl::run_score(score, common, std::cout);
    } else if (*calibrate_cmd) {
      calibrate.strategy = ng::filter::parse_strategy(strategy);
      pl::run_calibrate(calibrate, common, std::cout);
    } else if (*filter_cmd) {
      if (!filter_threshold.empty()) {
        filter.threshold_value = parse_threshold_value(filter_threshold);
      }
      pl::run_filter(filter, common, std::cout);
    } else if (*eval_cmd) {
      if (!eval_threshold.empty()) {
        eval.threshold_value = parse_threshold_value(eval_threshold);
      }
      pl::run_eval(eval, common, std::cout);
    } else if (*report_cmd) {
      report.kind = pl::parse_report_kind(report_kind);
      pl::run_report(report, common, std::cout);
    }
  } catch (const ng::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ng::ErrorKind::kData);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ng::ErrorKind::kData);
  }
  return 0;
}
