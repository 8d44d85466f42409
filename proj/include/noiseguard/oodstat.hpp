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

#ifndef NOISEGUARD_OODSTAT_HPP_
#define NOISEGUARD_OODSTAT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noiseguard/embedhub.hpp"
#include "noiseguard/textcore.hpp"

namespace noiseguard::ood {

enum class Execution { kSerial, kParallel };

enum class Regularization {
  // Adds eps * I with eps = 1e-6 * trace(cov) / dim (1e-6 if the trace is 0).
  kTraceScaled,
  // No shrinkage; fitting fails on singular covariances.
  kNone,
};

struct FitOptions {
  Regularization regularization = Regularization::kTraceScaled;
  Execution execution = Execution::kParallel;
};

inline constexpr double kRelativeShrinkage = 1e-6;
inline constexpr std::size_t kDefaultFitCap = 10000;

// Multivariate Gaussian with full covariance, stored as the Cholesky factor
// of the regularized covariance.
class GaussianModel {
 public:
  GaussianModel() = default;
  // Validates shapes and the factor diagonal; throws DataError.
  GaussianModel(std::vector<double> mean, std::vector<double> packed_factor,
                std::uint64_t sample_count, double epsilon);

  std::size_t dim() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }
  // Lower triangle, row-major packed (see kernels::packed_index).
  const std::vector<double>& factor() const { return factor_; }
  std::uint64_t sample_count() const { return sample_count_; }
  double epsilon() const { return epsilon_; }

  bool operator==(const GaussianModel&) const = default;

 private:
  std::vector<double> mean_;
  std::vector<double> factor_;
  std::uint64_t sample_count_ = 0;
  double epsilon_ = 0.0;
};

// Unbiased covariance (divisor n - 1) plus shrinkage, then Cholesky.
// Throws DataError for fewer than 2 vectors, ragged or non-finite input, and
// NumericError when the factorization fails.
GaussianModel fit_gaussian(std::span<const std::vector<double>> vectors,
                           const FitOptions& options = {});

// Packed lower Cholesky factor of a dense symmetric matrix. Throws
// NumericError if the matrix is not positive definite.
std::vector<double> cholesky(std::span<const double> dense, std::size_t dim);

// (z - mean)^T cov^{-1} (z - mean).
double mahalanobis(const GaussianModel& model, std::span<const double> z);

// Row-major queries, one distance per row.
std::vector<double> mahalanobis_batch(const GaussianModel& model,
                                      std::span<const double> queries,
                                      Execution execution);

// Relative Mahalanobis distance MD_in(z) - MD_bg(z); positive means the
// vector looks more like the background than the in-domain data.
double rmd(const GaussianModel& in_model, const GaussianModel& bg_model,
           std::span<const double> z);

// ---------------------------------------------------------------------------
// Noisiness scores.

enum class Method { kLoTok, kLoSent, kSent, kNll };
enum class LeaveOutMode { kPooled, kReencode };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
std::string_view to_string(LeaveOutMode mode);
LeaveOutMode parse_leave_out_mode(std::string_view name);

struct ScoreSet {
  std::string doc_id;
  Method method = Method::kSent;
  std::vector<double> sentence_scores;
  std::vector<double> token_scores;

  bool operator==(const ScoreSet&) const = default;
};

// RMD of the mean-pooled full document.
double score_sequence(const text::Document& doc,
                      const embed::EmbeddingMatrix& emb,
                      const GaussianModel& in_model,
                      const GaussianModel& bg_model);

// Leave-out sentence score: S(doc) - S(doc without the sentence). With a
// single sentence the score is S(doc). Pooled mode derives the leave-out
// embedding from cached rows; reencode mode asks `provider` to embed the
// edited token sequence (CapabilityError for stored providers).
ScoreSet score_lo_sent(const text::Document& doc,
                       const embed::EmbeddingMatrix& emb,
                       const GaussianModel& in_model,
                       const GaussianModel& bg_model, LeaveOutMode mode,
                       const embed::EmbeddingProvider* provider = nullptr);

// Leave-out token score; sentence_scores hold the mean of member tokens.
ScoreSet score_lo_tok(const text::Document& doc,
                      const embed::EmbeddingMatrix& emb,
                      const GaussianModel& in_model,
                      const GaussianModel& bg_model, LeaveOutMode mode,
                      const embed::EmbeddingProvider* provider = nullptr);

// Sentence-level RMD under sentence-level models, broadcast to tokens.
ScoreSet score_sent(const text::Document& doc,
                    const embed::EmbeddingMatrix& emb,
                    const GaussianModel& in_sent_model,
                    const GaussianModel& bg_sent_model);

// Mean per-token NLL of each sentence, broadcast to tokens.
ScoreSet score_nll(const text::Document& doc, std::span<const double> nll_rows);

struct ScoringInputs {
  Method method = Method::kSent;
  LeaveOutMode mode = LeaveOutMode::kPooled;
  const GaussianModel* in_model = nullptr;
  const GaussianModel* bg_model = nullptr;
  const embed::EmbeddingProvider* provider = nullptr;
  const embed::EmbeddingStore* nll_store = nullptr;
};

// One ScoreSet per document, in corpus order. The parallel path scores
// documents independently, so both paths return identical results.
std::vector<ScoreSet> score_corpus(const text::Corpus& corpus,
                                   const ScoringInputs& inputs,
                                   Execution execution);

// Mean-pooled vectors used to fit sequence-level (one per document) or
// sentence-level (one per sentence) models from the first `doc_cap`
// documents.
enum class FitLevel { kSequence, kSentence };
std::string_view to_string(FitLevel level);
FitLevel parse_fit_level(std::string_view name);

std::vector<std::vector<double>> pooled_fit_vectors(
    const text::Corpus& corpus, const embed::EmbeddingProvider& provider,
    FitLevel level, std::size_t doc_cap = kDefaultFitCap);

// Throws DataError unless the score set matches the document's token and
// sentence counts.
void check_aligned(const ScoreSet& scores, const text::Document& doc);

// ---------------------------------------------------------------------------
// Serialization.

// Binary model artifact: "GAUS", u16 version, u32 dim, u64 sample count,
// f64 epsilon, f64 mean[dim], f64 packed factor, little-endian.
std::string encode_model(const GaussianModel& model);
GaussianModel decode_model(std::string_view bytes);
void write_model(const GaussianModel& model, const std::filesystem::path& path);
GaussianModel read_model(const std::filesystem::path& path);

// Line-delimited JSON: {"id","method","sentence_scores","token_scores"}.
std::string serialize_score_sets(std::span<const ScoreSet> sets);
std::vector<ScoreSet> parse_score_sets(std::string_view contents);
void write_score_sets(std::span<const ScoreSet> sets,
                      const std::filesystem::path& path);
std::vector<ScoreSet> read_score_sets(const std::filesystem::path& path);

}  // namespace noiseguard::ood

#endif  // NOISEGUARD_OODSTAT_HPP_
