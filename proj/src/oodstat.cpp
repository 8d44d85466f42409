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

#include "noiseguard/oodstat.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "noiseguard/error.hpp"
#include "noiseguard/kernels.hpp"

namespace noiseguard::ood {
namespace {

void check_dim(const GaussianModel& model, std::size_t dim) {
  if (model.dim() != dim) {
    throw DataError("dimension mismatch: model has " +
                    std::to_string(model.dim()) + ", vector has " +
                    std::to_string(dim));
  }
}

void check_rows(const text::Document& doc, const embed::EmbeddingMatrix& emb) {
  if (emb.rows() != doc.token_count()) {
    throw DataError("embeddings for '" + doc.id() + "' have " +
                    std::to_string(emb.rows()) + " rows, document has " +
                    std::to_string(doc.token_count()) + " tokens");
  }
}

std::vector<double> divided(std::vector<double> v, std::size_t n) {
  for (auto& x : v) x /= static_cast<double>(n);
  return v;
}

// Full-sequence score and the per-part leave-out scores for a list of
// disjoint token ranges (sentences, or single tokens).
std::vector<double> leave_out_scores(
    const text::Document& doc, const embed::EmbeddingMatrix& emb,
    const GaussianModel& in_model, const GaussianModel& bg_model,
    LeaveOutMode mode, const embed::EmbeddingProvider* provider,
    const std::vector<text::SentenceSpan>& parts) {
  check_rows(doc, emb);
  const std::size_t t = doc.token_count();
  if (t == 0) throw DataError("cannot score empty document '" + doc.id() + "'");
  if (mode == LeaveOutMode::kReencode) {
    if (provider == nullptr) {
      throw UsageError("reencode mode needs an embedding provider");
    }
    if (provider->mode() != embed::ProviderMode::kContextFree) {
      throw CapabilityError(
          "reencode mode needs a provider that can embed edited input");
    }
  }

  const auto total = embed::pool_sum(emb, 0, t);
  const double full = rmd(in_model, bg_model, divided(total, t));

  std::vector<double> scores(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& part = parts[p];
    const std::size_t kept = t - part.size();
    if (kept == 0) {
      scores[p] = full;
      continue;
    }
    std::vector<double> z;
    if (mode == LeaveOutMode::kPooled) {
      z = total;
      const auto removed = embed::pool_sum(emb, part.token_begin, part.token_end);
      for (std::size_t d = 0; d < z.size(); ++d) z[d] -= removed[d];
      z = divided(std::move(z), kept);
    } else {
      std::vector<std::string> edited;
      edited.reserve(kept);
      for (std::size_t k = 0; k < t; ++k) {
        if (k < part.token_begin || k >= part.token_end) {
          edited.push_back(doc.tokens()[k].text);
        }
      }
      const auto re = provider->embed_tokens(doc.id(), edited);
      z = embed::pool_mean(re, 0, re.rows());
    }
    scores[p] = full - rmd(in_model, bg_model, z);
  }
  return scores;
}

ScoreSet broadcast(const text::Document& doc, Method method,
                   std::vector<double> sentence_scores) {
  ScoreSet set{doc.id(), method, std::move(sentence_scores),
               std::vector<double>(doc.token_count())};
  for (std::size_t s = 0; s < doc.sentence_count(); ++s) {
    const auto& span = doc.sentences()[s];
    for (std::size_t k = span.token_begin; k < span.token_end; ++k) {
      set.token_scores[k] = set.sentence_scores[s];
    }
  }
  return set;
}

}  // namespace

GaussianModel::GaussianModel(std::vector<double> mean,
                             std::vector<double> packed_factor,
                             std::uint64_t sample_count, double epsilon)
    : mean_(std::move(mean)),
      factor_(std::move(packed_factor)),
      sample_count_(sample_count),
      epsilon_(epsilon) {
  const std::size_t d = mean_.size();
  if (d == 0) throw DataError("model dimension must be positive");
  if (factor_.size() != d * (d + 1) / 2) {
    throw DataError("model factor has wrong size");
  }
  if (sample_count_ < 2) throw DataError("model needs at least 2 samples");
  for (std::size_t i = 0; i < d; ++i) {
    const double diag = factor_[kernels::packed_index(i, i)];
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw DataError("model factor diagonal must be positive");
    }
  }
}

std::vector<double> cholesky(std::span<const double> dense, std::size_t dim) {
  std::vector<double> l(dim * (dim + 1) / 2, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = dense[i * dim + j];
      const double* li = l.data() + kernels::packed_index(i, 0);
      const double* lj = l.data() + kernels::packed_index(j, 0);
      for (std::size_t k = 0; k < j; ++k) acc -= li[k] * lj[k];
      if (i == j) {
        const double floor = dense[i * dim + i] * static_cast<double>(dim) *
                             std::numeric_limits<double>::epsilon();
        if (!(acc > floor) || !std::isfinite(acc)) {
          throw NumericError("covariance is not positive definite (pivot " +
                             std::to_string(i) + ")");
        }
        l[kernels::packed_index(i, i)] = std::sqrt(acc);
      } else {
        l[kernels::packed_index(i, j)] = acc / lj[j];
      }
    }
  }
  return l;
}

GaussianModel fit_gaussian(std::span<const std::vector<double>> vectors,
                           const FitOptions& options) {
  if (vectors.size() < 2) {
    throw DataError("fitting a Gaussian needs at least 2 vectors, got " +
                    std::to_string(vectors.size()));
  }
  const std::size_t dim = vectors.front().size();
  if (dim == 0) throw DataError("cannot fit zero-dimensional vectors");
  std::vector<double> flat;
  flat.reserve(vectors.size() * dim);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw DataError("fit vectors have unequal dimension");
    for (double x : v) {
      if (!std::isfinite(x)) throw DataError("fit vectors must be finite");
      flat.push_back(x);
    }
  }
  const std::size_t n = vectors.size();
  const auto m = options.execution == Execution::kParallel
                     ? kernels::omp::moments(flat, n, dim)
                     : kernels::serial::moments(flat, n, dim);

  std::vector<double> cov = m.scatter;
  for (auto& c : cov) c /= static_cast<double>(n - 1);

  double epsilon = 0.0;
  if (options.regularization == Regularization::kTraceScaled) {
    double trace = 0.0;
    for (std::size_t i = 0; i < dim; ++i) trace += cov[i * dim + i];
    epsilon = trace > 0.0 ? kRelativeShrinkage * trace / static_cast<double>(dim)
                          : kRelativeShrinkage;
    for (std::size_t i = 0; i < dim; ++i) cov[i * dim + i] += epsilon;
  }
  return GaussianModel(m.mean, cholesky(cov, dim), n, epsilon);
}

double mahalanobis(const GaussianModel& model, std::span<const double> z) {
  check_dim(model, z.size());
  double out = 0.0;
  kernels::serial::mahalanobis_batch(model.mean(), model.factor(), z,
                                     std::span<double>(&out, 1));
  return out;
}

std::vector<double> mahalanobis_batch(const GaussianModel& model,
                                      std::span<const double> queries,
                                      Execution execution) {
  if (queries.size() % model.dim() != 0) {
    throw DataError("query buffer is not a multiple of the model dimension");
  }
  std::vector<double> out(queries.size() / model.dim());
  if (execution == Execution::kParallel) {
    kernels::omp::mahalanobis_batch(model.mean(), model.factor(), queries, out);
  } else {
    kernels::serial::mahalanobis_batch(model.mean(), model.factor(), queries,
                                       out);
  }
  return out;
}

double rmd(const GaussianModel& in_model, const GaussianModel& bg_model,
           std::span<const double> z) {
  if (in_model.dim() != bg_model.dim()) {
    throw DataError("in-domain and background models differ in dimension");
  }
  return mahalanobis(in_model, z) - mahalanobis(bg_model, z);
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kLoTok:
      return "lo_tok";
    case Method::kLoSent:
      return "lo_sent";
    case Method::kSent:
      return "sent";
    case Method::kNll:
      return "nll";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kLoTok, Method::kLoSent, Method::kSent,
                   Method::kNll}) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown scoring method '" + std::string(name) + "'");
}

std::string_view to_string(LeaveOutMode mode) {
  return mode == LeaveOutMode::kPooled ? "pooled" : "reencode";
}

LeaveOutMode parse_leave_out_mode(std::string_view name) {
  if (name == "pooled") return LeaveOutMode::kPooled;
  if (name == "reencode") return LeaveOutMode::kReencode;
  throw UsageError("unknown leave-out mode '" + std::string(name) + "'");
}

std::string_view to_string(FitLevel level) {
  return level == FitLevel::kSequence ? "sequence" : "sentence";
}

FitLevel parse_fit_level(std::string_view name) {
  if (name == "sequence") return FitLevel::kSequence;
  if (name == "sentence") return FitLevel::kSentence;
  throw UsageError("unknown fit level '" + std::string(name) + "'");
}

double score_sequence(const text::Document& doc,
                      const embed::EmbeddingMatrix& emb,
                      const GaussianModel& in_model,
                      const GaussianModel& bg_model) {
  check_rows(doc, emb);
  if (doc.token_count() == 0) {
    throw DataError("cannot score empty document '" + doc.id() + "'");
  }
  return rmd(in_model, bg_model, embed::pool_mean(emb, 0, doc.token_count()));
}

ScoreSet score_lo_sent(const text::Document& doc,
                       const embed::EmbeddingMatrix& emb,
                       const GaussianModel& in_model,
                       const GaussianModel& bg_model, LeaveOutMode mode,
                       const embed::EmbeddingProvider* provider) {
  return broadcast(doc, Method::kLoSent,
                   leave_out_scores(doc, emb, in_model, bg_model, mode,
                                    provider, doc.sentences()));
}

ScoreSet score_lo_tok(const text::Document& doc,
                      const embed::EmbeddingMatrix& emb,
                      const GaussianModel& in_model,
                      const GaussianModel& bg_model, LeaveOutMode mode,
                      const embed::EmbeddingProvider* provider) {
  std::vector<text::SentenceSpan> singles(doc.token_count());
  for (std::size_t k = 0; k < singles.size(); ++k) singles[k] = {k, k + 1};
  ScoreSet set{doc.id(), Method::kLoTok, {},
               leave_out_scores(doc, emb, in_model, bg_model, mode, provider,
                                singles)};
  for (const auto& s : doc.sentences()) {
    double sum = 0.0;
    for (std::size_t k = s.token_begin; k < s.token_end; ++k) {
      sum += set.token_scores[k];
    }
    set.sentence_scores.push_back(sum / static_cast<double>(s.size()));
  }
  return set;
}

ScoreSet score_sent(const text::Document& doc,
                    const embed::EmbeddingMatrix& emb,
                    const GaussianModel& in_sent_model,
                    const GaussianModel& bg_sent_model) {
  check_rows(doc, emb);
  std::vector<double> scores;
  scores.reserve(doc.sentence_count());
  for (const auto& s : doc.sentences()) {
    scores.push_back(rmd(in_sent_model, bg_sent_model,
                         embed::pool_mean(emb, s.token_begin, s.token_end)));
  }
  return broadcast(doc, Method::kSent, std::move(scores));
}

ScoreSet score_nll(const text::Document& doc,
                   std::span<const double> nll_rows) {
  if (nll_rows.size() != doc.token_count()) {
    throw DataError("NLL rows for '" + doc.id() + "' have length " +
                    std::to_string(nll_rows.size()) + ", document has " +
                    std::to_string(doc.token_count()) + " tokens");
  }
  std::vector<double> scores;
  scores.reserve(doc.sentence_count());
  for (const auto& s : doc.sentences()) {
    double sum = 0.0;
    for (std::size_t k = s.token_begin; k < s.token_end; ++k) sum += nll_rows[k];
    scores.push_back(sum / static_cast<double>(s.size()));
  }
  return broadcast(doc, Method::kNll, std::move(scores));
}

namespace {

ScoreSet score_one(const text::Document& doc, const ScoringInputs& in) {
  if (in.method == Method::kNll) {
    if (in.nll_store == nullptr) {
      throw UsageError("the nll method needs an NLLS store");
    }
    const auto rows = embed::nll_rows_for(*in.nll_store, doc);
    return score_nll(doc, rows);
  }
  if (in.in_model == nullptr || in.bg_model == nullptr ||
      in.provider == nullptr) {
    throw UsageError("embedding methods need both models and embeddings");
  }
  const auto emb = in.provider->embed_document(doc);
  switch (in.method) {
    case Method::kSent:
      return score_sent(doc, emb, *in.in_model, *in.bg_model);
    case Method::kLoSent:
      return score_lo_sent(doc, emb, *in.in_model, *in.bg_model, in.mode,
                           in.provider);
    case Method::kLoTok:
      return score_lo_tok(doc, emb, *in.in_model, *in.bg_model, in.mode,
                          in.provider);
    case Method::kNll:
      break;
  }
  throw UsageError("unsupported method");
}

}  // namespace

std::vector<ScoreSet> score_corpus(const text::Corpus& corpus,
                                   const ScoringInputs& inputs,
                                   Execution execution) {
  const auto& docs = corpus.documents;
  std::vector<ScoreSet> out(docs.size());
  if (execution == Execution::kSerial) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      out[i] = score_one(docs[i], inputs);
    }
    return out;
  }

  std::vector<std::exception_ptr> errors(docs.size());
  const auto n = static_cast<long long>(docs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = score_one(docs[i], inputs);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  // Report the first failing document in corpus order.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<std::vector<double>> pooled_fit_vectors(
    const text::Corpus& corpus, const embed::EmbeddingProvider& provider,
    FitLevel level, std::size_t doc_cap) {
  std::vector<std::vector<double>> vectors;
  std::size_t used = 0;
  for (const auto& doc : corpus.documents) {
    if (used == doc_cap) break;
    if (doc.token_count() == 0) continue;
    ++used;
    const auto emb = provider.embed_document(doc);
    if (emb.rows() != doc.token_count()) {
      throw DataError("embeddings for '" + doc.id() + "' are misaligned");
    }
    if (level == FitLevel::kSequence) {
      vectors.push_back(embed::pool_mean(emb, 0, doc.token_count()));
    } else {
      for (const auto& s : doc.sentences()) {
        vectors.push_back(embed::pool_mean(emb, s.token_begin, s.token_end));
      }
    }
  }
  return vectors;
}

void check_aligned(const ScoreSet& scores, const text::Document& doc) {
  if (scores.doc_id != doc.id() ||
      scores.token_scores.size() != doc.token_count() ||
      scores.sentence_scores.size() != doc.sentence_count()) {
    throw DataError("scores for '" + scores.doc_id +
                    "' do not align with document '" + doc.id() + "'");
  }
}

}  // namespace noiseguard::ood
