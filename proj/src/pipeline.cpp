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

#include "noiseguard/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "noiseguard/error.hpp"
#include "noiseguard/evalkit.hpp"
#include "noiseguard/kernels.hpp"

namespace noiseguard::pipeline {
namespace {

using KeyValues = std::vector<std::pair<std::string, std::string>>;
using Roles = std::vector<std::pair<std::string, path>>;

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string num(std::size_t v) { return std::to_string(v); }

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void record(const CommonOptions& common, const std::string& command,
            KeyValues config, const Roles& inputs, const Roles& outputs) {
  if (!common.manifest) return;
  ManifestEntry entry;
  entry.command = command;
  config.emplace_back("seed", std::to_string(common.seed));
  entry.config_hash = config_hash(std::move(config));
  entry.seed = common.seed;
  for (const auto& [role, p] : inputs) {
    entry.inputs.push_back(describe_artifact(role, p));
  }
  for (const auto& [role, p] : outputs) {
    entry.outputs.push_back(describe_artifact(role, p));
  }
  entry.version = NOISEGUARD_VERSION;
  append_manifest(*common.manifest, entry);
}

void apply_threads(const CommonOptions& common) {
  kernels::set_thread_count(common.threads);
}

std::string source_key(const EmbeddingSource& s) {
  if (s.store) return "store:" + s.store->string();
  return "reference:" + std::to_string(s.reference_dim) + ":" +
         std::to_string(s.reference_seed);
}

void add_source(Roles* roles, const std::string& role,
                const EmbeddingSource& s) {
  if (s.store) roles->emplace_back(role, *s.store);
}

double resolve_threshold(const std::optional<path>& file,
                         const std::optional<double>& value) {
  if (file && value) {
    throw UsageError("give either a threshold file or a threshold value");
  }
  if (value) return *value;
  if (file) {
    const auto spec = filter::read_threshold(*file);
    if (!spec.resolved) {
      throw DataError("threshold file " + file->string() +
                      " has no resolved value; run calibrate first");
    }
    return *spec.resolved;
  }
  throw UsageError("a threshold file or value is required");
}

std::string join_offenders(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ...";
  return out;
}

}  // namespace

std::unique_ptr<embed::EmbeddingProvider> make_provider(
    const EmbeddingSource& source) {
  if (source.store) {
    return std::make_unique<embed::StoredProvider>(
        embed::read_store(*source.store));
  }
  return std::make_unique<embed::ReferenceProvider>(source.reference_dim,
                                                    source.reference_seed);
}

std::vector<ood::ScoreSet> align_scores(const text::Corpus& corpus,
                                        std::vector<ood::ScoreSet> sets) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!by_id.emplace(sets[i].doc_id, i).second) {
      throw DataError("duplicate score set for '" + sets[i].doc_id + "'");
    }
  }
  std::vector<std::string> missing;
  std::vector<ood::ScoreSet> aligned;
  aligned.reserve(corpus.size());
  std::set<std::string> used;
  for (const auto& doc : corpus.documents) {
    auto it = by_id.find(doc.id());
    if (it == by_id.end()) {
      missing.push_back(doc.id());
      continue;
    }
    used.insert(doc.id());
    aligned.push_back(std::move(sets[it->second]));
  }
  std::vector<std::string> extra;
  for (const auto& [id, i] : by_id) {
    if (!used.count(id)) extra.push_back(id);
  }
  std::sort(extra.begin(), extra.end());
  if (used.empty()) throw DataError("scores and corpus share no document ids");
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "scores and corpus ids disagree;";
    if (!missing.empty()) msg += " no scores for: " + join_offenders(missing) + ";";
    if (!extra.empty()) msg += " not in corpus: " + join_offenders(extra) + ";";
    throw DataError(msg);
  }
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    ood::check_aligned(aligned[i], corpus.documents[i]);
  }
  return aligned;
}

std::vector<SummaryRecord> read_summaries(const path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open summaries " + file.string());
  std::vector<SummaryRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("id").get<std::string>(),
                     j.at("summary").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw DataError(file.string() + " line " + std::to_string(line_no) +
                      ": " + e.what());
    }
  }
  return out;
}

ReportKind parse_report_kind(std::string_view name) {
  if (name == "distribution") return ReportKind::kDistribution;
  if (name == "store") return ReportKind::kStore;
  if (name == "summaries") return ReportKind::kSummaries;
  if (name == "manifest") return ReportKind::kManifest;
  throw UsageError("unknown report kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

void run_inject(const InjectOptions& o, const CommonOptions& common,
                std::ostream& out) {
  apply_threads(common);
  const auto corpus = text::load_corpus(o.corpus);
  const auto pool = noise::load_noise_pool(o.pool, o.kind);

  text::Corpus noisy;
  noisy.documents.resize(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
  const auto n = static_cast<long long>(corpus.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < n; ++i) {
    const auto& doc = corpus.documents[i];
    try {
      noise::NoiseSpec spec{o.amount,
                            noise::derive_document_seed(common.seed, doc.id()),
                            o.kind};
      noisy.documents[i] = noise::inject(doc, pool, spec);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  text::write_corpus(noisy, o.out);

  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (const auto& doc : noisy.documents) {
    const double f = noise::noise_fraction(doc);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    sum += f;
  }
  Table t{"inject", {"documents", "kind", "target", "mean_fraction",
                     "min_fraction", "max_fraction"}, {}};
  t.rows.push_back({num(noisy.size()), std::string(noise::to_string(o.kind)),
                    num(o.amount),
                    fixed4(noisy.empty() ? 0.0 : sum / noisy.size()),
                    fixed4(noisy.empty() ? 0.0 : lo),
                    fixed4(noisy.empty() ? 0.0 : hi)});
  render({t}, common.format, out);

  record(common, "inject",
         {{"kind", std::string(noise::to_string(o.kind))},
          {"amount", num(o.amount)}},
         {{"corpus", o.corpus}, {"pool", o.pool}}, {{"noisy_corpus", o.out}});
}

void run_embed(const EmbedOptions& o, const CommonOptions& common,
               std::ostream& out) {
  const auto corpus = text::load_corpus(o.corpus);
  embed::ReferenceProvider provider(o.dim, o.embed_seed);
  embed::EmbeddingStore store(embed::StoreKind::kEmbeddings,
                              static_cast<std::uint32_t>(o.dim));
  std::size_t tokens = 0;
  for (const auto& doc : corpus.documents) {
    store.add(provider.embed_document(doc), doc);
    tokens += doc.token_count();
  }
  embed::write_store(store, o.out);

  Table t{"embed", {"documents", "tokens", "dim"}, {}};
  t.rows.push_back({num(corpus.size()), num(tokens), num(o.dim)});
  render({t}, common.format, out);
  record(common, "embed",
         {{"dim", num(o.dim)}, {"embed_seed", std::to_string(o.embed_seed)}},
         {{"corpus", o.corpus}}, {{"embeddings", o.out}});
}

void run_fit(const FitOptions& o, const CommonOptions& common,
             std::ostream& out) {
  apply_threads(common);
  if (o.cap == 0) throw UsageError("fit cap must be positive");
  const auto corpus = text::load_corpus(o.corpus);
  const auto background = text::load_corpus(o.background_corpus);
  const auto provider = make_provider(o.embeddings);
  const auto bg_provider = make_provider(o.background_embeddings);

  // The background model sees as many documents as the in-domain one.
  const std::size_t usable = static_cast<std::size_t>(std::count_if(
      corpus.documents.begin(), corpus.documents.end(),
      [](const text::Document& d) { return d.token_count() > 0; }));
  const std::size_t in_docs = std::min(o.cap, usable);

  const auto in_vectors =
      ood::pooled_fit_vectors(corpus, *provider, o.level, in_docs);
  const auto bg_vectors =
      ood::pooled_fit_vectors(background, *bg_provider, o.level, in_docs);
  const auto in_model = ood::fit_gaussian(in_vectors);
  const auto bg_model = ood::fit_gaussian(bg_vectors);
  if (in_model.dim() != bg_model.dim()) {
    throw DataError("in-domain and background embeddings differ in dimension");
  }
  ood::write_model(in_model, o.out_in);
  ood::write_model(bg_model, o.out_bg);

  Table t{"fit", {"model", "level", "samples", "dim", "epsilon"}, {}};
  for (const auto& [name, m] :
       {std::pair{"in_domain", &in_model}, std::pair{"background", &bg_model}}) {
    t.rows.push_back({name, std::string(ood::to_string(o.level)),
                      std::to_string(m->sample_count()), num(m->dim()),
                      num(m->epsilon())});
  }
  render({t}, common.format, out);

  Roles inputs{{"corpus", o.corpus}, {"background_corpus", o.background_corpus}};
  add_source(&inputs, "embeddings", o.embeddings);
  add_source(&inputs, "background_embeddings", o.background_embeddings);
  record(common, "fit",
         {{"level", std::string(ood::to_string(o.level))},
          {"cap", num(o.cap)},
          {"embeddings", source_key(o.embeddings)},
          {"background_embeddings", source_key(o.background_embeddings)}},
         inputs, {{"in_model", o.out_in}, {"bg_model", o.out_bg}});
}

void run_score(const ScoreOptions& o, const CommonOptions& common,
               std::ostream& out) {
  apply_threads(common);
  const auto corpus = text::load_corpus(o.corpus);
  ood::ScoringInputs inputs;
  inputs.method = o.method;
  inputs.mode = o.mode;

  std::unique_ptr<embed::EmbeddingProvider> provider;
  std::optional<embed::EmbeddingStore> nll;
  std::optional<ood::GaussianModel> in_model, bg_model;
  Roles roles{{"corpus", o.corpus}};
  if (o.method == ood::Method::kNll) {
    if (!o.nll_store) throw UsageError("the nll method needs --nll-store");
    nll = embed::read_store(*o.nll_store);
    if (nll->kind() != embed::StoreKind::kLikelihoods) {
      throw UsageError(o.nll_store->string() + " is not an NLLS store");
    }
    inputs.nll_store = &*nll;
    roles.emplace_back("nll_store", *o.nll_store);
  } else {
    if (!o.in_model || !o.bg_model) {
      throw UsageError("embedding methods need --in-model and --bg-model");
    }
    provider = make_provider(o.embeddings);
    if (o.mode == ood::LeaveOutMode::kReencode &&
        provider->mode() != embed::ProviderMode::kContextFree) {
      throw CapabilityError(
          "reencode mode cannot use stored embeddings; use --mode pooled");
    }
    in_model = ood::read_model(*o.in_model);
    bg_model = ood::read_model(*o.bg_model);
    inputs.in_model = &*in_model;
    inputs.bg_model = &*bg_model;
    inputs.provider = provider.get();
    roles.emplace_back("in_model", *o.in_model);
    roles.emplace_back("bg_model", *o.bg_model);
    add_source(&roles, "embeddings", o.embeddings);
  }

  const auto sets =
      ood::score_corpus(corpus, inputs, ood::Execution::kParallel);
  ood::write_score_sets(sets, o.out);

  std::size_t sentences = 0;
  double sum = 0.0;
  for (const auto& s : sets) {
    sentences += s.sentence_scores.size();
    for (double v : s.sentence_scores) sum += v;
  }
  Table t{"score", {"documents", "sentences", "method", "mode",
                    "mean_sentence_score"}, {}};
  t.rows.push_back({num(sets.size()), num(sentences),
                    std::string(ood::to_string(o.method)),
                    std::string(ood::to_string(o.mode)),
                    fixed4(sentences ? sum / sentences : 0.0)});
  render({t}, common.format, out);
  record(common, "score",
         {{"method", std::string(ood::to_string(o.method))},
          {"mode", std::string(ood::to_string(o.mode))},
          {"embeddings", source_key(o.embeddings)}},
         roles, {{"scores", o.out}});
}

void run_calibrate(const CalibrateOptions& o, const CommonOptions& common,
                   std::ostream& out) {
  const auto sets = ood::read_score_sets(o.scores);
  std::vector<double> clean;
  for (const auto& s : sets) {
    clean.insert(clean.end(), s.sentence_scores.begin(),
                 s.sentence_scores.end());
  }

  filter::ThresholdSpec spec;
  spec.strategy = o.strategy;
  spec.value = o.value;
  spec.percentile = o.percentile;

  Roles roles{{"clean_scores", o.scores}};
  std::optional<filter::LabeledScores> validation;
  if (o.strategy == filter::Strategy::kOptimalF1) {
    if (!o.validation_scores || !o.validation_corpus) {
      throw UsageError(
          "optimal_f1 needs --validation-scores and --validation-corpus");
    }
    const auto corpus = text::load_corpus(*o.validation_corpus);
    const auto vsets =
        align_scores(corpus, ood::read_score_sets(*o.validation_scores));
    validation.emplace();
    for (std::size_t i = 0; i < vsets.size(); ++i) {
      const auto labels = corpus.documents[i].noise_labels();
      validation->scores.insert(validation->scores.end(),
                                vsets[i].token_scores.begin(),
                                vsets[i].token_scores.end());
      validation->labels.insert(validation->labels.end(), labels.begin(),
                                labels.end());
    }
    roles.emplace_back("validation_scores", *o.validation_scores);
    roles.emplace_back("validation_corpus", *o.validation_corpus);
  }
  spec = filter::calibrate_threshold(clean, spec,
                                     validation ? &*validation : nullptr);
  filter::write_threshold(spec, o.out);

  Table t{"calibrate", {"strategy", "resolved", "calibration_count",
                        "calibration_mean", "calibration_variance"}, {}};
  t.rows.push_back({std::string(filter::to_string(spec.strategy)),
                    num(*spec.resolved), num(spec.fingerprint.count),
                    num(spec.fingerprint.mean), num(spec.fingerprint.variance)});
  render({t}, common.format, out);
  record(common, "calibrate",
         {{"strategy", std::string(filter::to_string(o.strategy))},
          {"value", num(o.value)},
          {"percentile", num(o.percentile)}},
         roles, {{"threshold", o.out}});
}

void run_filter(const FilterOptions& o, const CommonOptions& common,
                std::ostream& out) {
  const auto corpus = text::load_corpus(o.corpus);

  if (o.mask_embeddings) {
    const auto store = embed::read_store(*o.mask_embeddings);
    if (store.kind() != embed::StoreKind::kEmbeddings) {
      throw UsageError("masking needs an EMBS store");
    }
    embed::EmbeddingStore masked(embed::StoreKind::kEmbeddings, store.dim());
    std::size_t kept_rows = 0, dropped_rows = 0;
    for (const auto& doc : corpus.documents) {
      const auto emb = store.matrix_for(doc);
      const auto m = filter::mask_embeddings(emb, doc);
      embed::StoreRecord rec;
      rec.doc_id = doc.id();
      for (std::size_t k : m.index_map) {
        rec.offsets.push_back({doc.tokens()[k].begin, doc.tokens()[k].end});
      }
      rec.values = m.matrix.values();
      kept_rows += m.index_map.size();
      dropped_rows += doc.token_count() - m.index_map.size();
      masked.add(std::move(rec));
    }
    embed::write_store(masked, o.out);
    Table t{"mask", {"documents", "kept_rows", "dropped_rows"}, {}};
    t.rows.push_back({num(corpus.size()), num(kept_rows), num(dropped_rows)});
    render({t}, common.format, out);
    record(common, "filter", {{"mode", "mask"}},
           {{"corpus", o.corpus}, {"embeddings", *o.mask_embeddings}},
           {{"masked_embeddings", o.out}});
    return;
  }

  if (!o.scores) throw UsageError("filtering needs --scores");
  const double threshold = resolve_threshold(o.threshold_file, o.threshold_value);
  const auto sets = align_scores(corpus, ood::read_score_sets(*o.scores));

  text::Corpus filtered;
  std::size_t removed = 0, total = 0, emptied = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto r = filter::apply_filter(corpus.documents[i], sets[i], threshold);
    removed += r.removed_sentences;
    total += corpus.documents[i].sentence_count();
    emptied += r.emptied ? 1 : 0;
    filtered.documents.push_back(std::move(r.document));
  }
  text::write_corpus(filtered, o.out);

  Table t{"filter", {"documents", "threshold", "sentences", "removed",
                     "emptied_documents"}, {}};
  t.rows.push_back({num(corpus.size()), num(threshold), num(total),
                    num(removed), num(emptied)});
  render({t}, common.format, out);

  Roles roles{{"corpus", o.corpus}, {"scores", *o.scores}};
  if (o.threshold_file) roles.emplace_back("threshold", *o.threshold_file);
  record(common, "filter", {{"mode", "filter"}, {"threshold", num(threshold)}},
         roles, {{"filtered_corpus", o.out}});
}

void run_eval(const EvalOptions& o, const CommonOptions& common,
              std::ostream& out) {
  if (!o.scores && !o.filtered && !o.candidates) {
    throw UsageError("eval needs --scores, --filtered or --candidates");
  }
  const auto corpus = text::load_corpus(o.corpus);
  Table metrics{"eval", {"section", "metric", "value"}, {}};
  std::vector<Table> tables;

  if (o.scores) {
    const double threshold =
        (o.threshold_file || o.threshold_value)
            ? resolve_threshold(o.threshold_file, o.threshold_value)
            : std::numeric_limits<double>::infinity();
    const auto sets = align_scores(corpus, ood::read_score_sets(*o.scores));
    const auto report =
        eval::detection_report(sets, corpus.documents, threshold);
    auto add = [&](const std::string& m, const std::string& v) {
      metrics.rows.push_back({"detection", m, v});
    };
    add("overall_auc", fixed4(report.overall_auc));
    add("per_example_auc", fixed4(report.per_example_auc));
    add("scored_examples", num(report.scored_examples));
    add("skipped_examples", num(report.skipped_examples));
    add("threshold", num(report.threshold));
    add("precision", fixed4(report.at_threshold.precision));
    add("recall", fixed4(report.at_threshold.recall));
    add("f1", fixed4(report.at_threshold.f1));
  }

  if (o.filtered) {
    const auto filtered = text::load_corpus(*o.filtered);
    std::unordered_map<std::string, const text::Document*> by_id;
    for (const auto& d : filtered.documents) by_id[d.id()] = &d;
    std::vector<std::string> missing;
    std::size_t noisy_before = 0, noisy_after = 0, clean_before = 0,
                clean_after = 0;
    for (const auto& d : corpus.documents) {
      auto it = by_id.find(d.id());
      if (it == by_id.end()) {
        missing.push_back(d.id());
        continue;
      }
      for (const auto& t : d.tokens()) (t.is_noise ? noisy_before : clean_before)++;
      for (const auto& t : it->second->tokens()) {
        (t.is_noise ? noisy_after : clean_after)++;
      }
    }
    if (!missing.empty() || filtered.size() != corpus.size()) {
      throw DataError("filtered corpus ids disagree with corpus; missing: " +
                      join_offenders(missing));
    }
    auto frac = [](std::size_t after, std::size_t before) {
      return before == 0 ? 0.0
                         : 1.0 - static_cast<double>(after) /
                                     static_cast<double>(before);
    };
    metrics.rows.push_back({"filtering", "noise_tokens_removed",
                            fixed4(frac(noisy_after, noisy_before))});
    metrics.rows.push_back({"filtering", "clean_tokens_removed",
                            fixed4(frac(clean_after, clean_before))});
  }

  if (o.candidates) {
    const auto candidates = read_summaries(*o.candidates);
    const auto references =
        o.references ? text::load_corpus(*o.references) : corpus;
    std::unordered_map<std::string, const text::Document*> ref_by_id;
    for (const auto& d : references.documents) {
      if (d.summary()) ref_by_id[d.id()] = &d;
    }
    std::vector<std::string> offenders;
    std::vector<eval::RougeScores> scores;
    std::vector<std::string> texts;
    for (const auto& c : candidates) {
      texts.push_back(c.summary);
      auto it = ref_by_id.find(c.id);
      if (it == ref_by_id.end()) {
        offenders.push_back(c.id);
        continue;
      }
      scores.push_back(eval::rouge(c.summary, *it->second->summary()));
    }
    if (scores.empty()) {
      throw DataError("candidate summaries share no ids with the references");
    }
    if (!offenders.empty()) {
      throw DataError("candidates without a reference summary: " +
                      join_offenders(offenders));
    }
    const auto mean = eval::mean_rouge(scores);
    auto add = [&](const std::string& m, double v) {
      metrics.rows.push_back({"rouge", m, fixed4(v)});
    };
    add("rouge1_f1", mean.r1.f1);
    add("rouge2_f1", mean.r2.f1);
    add("rougeL_f1", mean.rl.f1);
    add("geometric_mean_f1", mean.geometric_mean_f1);
    metrics.rows.push_back({"rouge", "pairs", num(scores.size())});

    Table top{"top_summaries", {"summary", "count"}, {}};
    for (const auto& row : eval::top_summaries(texts, o.top_k)) {
      top.rows.push_back({row.summary, num(row.count)});
    }
    tables.push_back(std::move(top));
  }
  tables.insert(tables.begin(), std::move(metrics));
  render(tables, common.format, out);
}

void run_report(const ReportOptions& o, const CommonOptions& common,
                std::ostream& out) {
  switch (o.kind) {
    case ReportKind::kDistribution: {
      if (!o.noisy_corpus || !o.noisy_scores) {
        throw UsageError("distribution report needs --noisy-corpus and "
                         "--noisy-scores");
      }
      std::vector<std::pair<std::string, std::vector<double>>> groups;
      if (o.clean_scores) {
        std::vector<double> before;
        auto sets = ood::read_score_sets(*o.clean_scores);
        if (o.clean_corpus) {
          sets = align_scores(text::load_corpus(*o.clean_corpus),
                              std::move(sets));
        }
        for (const auto& s : sets) {
          before.insert(before.end(), s.token_scores.begin(),
                        s.token_scores.end());
        }
        groups.emplace_back("clean_before_noise", std::move(before));
      }
      const auto noisy = text::load_corpus(*o.noisy_corpus);
      const auto sets = align_scores(noisy, ood::read_score_sets(*o.noisy_scores));
      std::vector<double> clean_after, noise;
      for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto& doc = noisy.documents[i];
        for (std::size_t k = 0; k < doc.token_count(); ++k) {
          (doc.tokens()[k].is_noise ? noise : clean_after)
              .push_back(sets[i].token_scores[k]);
        }
      }
      groups.emplace_back("clean_after_noise", std::move(clean_after));
      groups.emplace_back("noise", std::move(noise));
      const auto h = eval::score_distribution_report(groups, o.bins);

      Table bins{"histogram", {"group", "bin", "lower", "upper", "count",
                               "fraction"}, {}};
      Table stats{"group_stats", {"group", "size", "mean", "median"}, {}};
      for (const auto& g : h.groups) {
        for (std::size_t b = 0; b < g.counts.size(); ++b) {
          bins.rows.push_back({g.name, num(b), num(h.edges[b]),
                               num(h.edges[b + 1]), num(g.counts[b]),
                               fixed4(g.fractions[b])});
        }
        stats.rows.push_back(
            {g.name, num(g.size), num(g.mean), num(g.median)});
      }
      render({stats, bins}, common.format, out);
      return;
    }
    case ReportKind::kStore: {
      if (!o.file) throw UsageError("store report needs --file");
      const auto store = embed::read_store(*o.file);
      std::size_t tokens = 0;
      for (const auto& r : store.records()) tokens += r.token_count();
      Table t{"store", {"kind", "dim", "records", "tokens"}, {}};
      t.rows.push_back(
          {store.kind() == embed::StoreKind::kEmbeddings ? "EMBS" : "NLLS",
           num(static_cast<std::size_t>(store.dim())), num(store.size()),
           num(tokens)});
      render({t}, common.format, out);
      return;
    }
    case ReportKind::kSummaries: {
      if (!o.summaries) throw UsageError("summaries report needs --summaries");
      std::vector<std::string> texts;
      for (const auto& r : read_summaries(*o.summaries)) texts.push_back(r.summary);
      Table t{"top_summaries", {"summary", "count"}, {}};
      for (const auto& row : eval::top_summaries(texts, o.top_k)) {
        t.rows.push_back({row.summary, num(row.count)});
      }
      render({t}, common.format, out);
      return;
    }
    case ReportKind::kManifest: {
      if (!o.file) throw UsageError("manifest report needs --file");
      Table t{"manifest", {"command", "config_hash", "role", "path", "status"},
              {}};
      for (const auto& e : read_manifest(*o.file)) {
        for (const auto& a : e.outputs) {
          std::string status = "missing";
          if (std::filesystem::exists(a.file)) {
            status = describe_artifact(a.role, a.file).fingerprint ==
                             a.fingerprint
                         ? "ok"
                         : "changed";
          }
          t.rows.push_back({e.command, e.config_hash, a.role, a.file, status});
        }
      }
      render({t}, common.format, out);
      return;
    }
  }
}

}  // namespace noiseguard::pipeline
