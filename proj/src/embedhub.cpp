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

#include "noiseguard/embedhub.hpp"

#include <cmath>

#include "noiseguard/error.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::embed {

EmbeddingMatrix::EmbeddingMatrix(std::string doc_id, std::size_t dim,
                                 std::size_t rows)
    : doc_id_(std::move(doc_id)), dim_(dim), values_(rows * dim, 0.0f) {}

EmbeddingMatrix::EmbeddingMatrix(std::string doc_id, std::size_t dim,
                                 std::vector<float> values)
    : doc_id_(std::move(doc_id)), dim_(dim), values_(std::move(values)) {
  if (dim_ == 0 || values_.size() % dim_ != 0) {
    throw DataError("embedding payload of " + std::to_string(values_.size()) +
                    " values is not a multiple of dim " +
                    std::to_string(dim_));
  }
}

std::vector<double> reference_embed(std::string_view token_text,
                                    std::size_t dim,
                                    std::uint64_t global_seed) {
  if (dim < 2) throw UsageError("reference embedder needs dim >= 2");
  SplitMix64 rng(fnv1a64(token_text) ^ global_seed);
  std::vector<double> v(dim);
  double norm2 = 0.0;
  for (auto& c : v) {
    c = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    norm2 += c * c;
  }
  // An all-zero draw has probability ~2^-53 per component; fall back to e0.
  if (norm2 == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : v) c *= inv;
  return v;
}

std::vector<double> pool_sum(const EmbeddingMatrix& matrix,
                             std::size_t token_begin, std::size_t token_end) {
  if (token_begin >= token_end || token_end > matrix.rows()) {
    throw DataError("pooling range [" + std::to_string(token_begin) + ", " +
                    std::to_string(token_end) + ") invalid for " +
                    std::to_string(matrix.rows()) + " rows");
  }
  std::vector<double> sum(matrix.dim(), 0.0);
  for (std::size_t r = token_begin; r < token_end; ++r) {
    const auto row = matrix.row(r);
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += row[d];
  }
  return sum;
}

PooledVector pool_mean(const EmbeddingMatrix& matrix, std::size_t token_begin,
                       std::size_t token_end) {
  auto mean = pool_sum(matrix, token_begin, token_end);
  const double n = static_cast<double>(token_end - token_begin);
  for (auto& v : mean) v /= n;
  return mean;
}

ReferenceProvider::ReferenceProvider(std::size_t dim, std::uint64_t global_seed)
    : dim_(dim), seed_(global_seed) {
  if (dim_ < 2) throw UsageError("reference embedder needs dim >= 2");
}

EmbeddingMatrix ReferenceProvider::embed_tokens(
    std::string doc_id, std::span<const std::string> tokens) const {
  EmbeddingMatrix out(std::move(doc_id), dim_, tokens.size());
  for (std::size_t r = 0; r < tokens.size(); ++r) {
    const auto v = reference_embed(tokens[r], dim_, seed_);
    auto row = out.row(r);
    for (std::size_t d = 0; d < dim_; ++d) row[d] = static_cast<float>(v[d]);
  }
  return out;
}

EmbeddingMatrix ReferenceProvider::embed_document(
    const text::Document& doc) const {
  std::vector<std::string> texts;
  texts.reserve(doc.token_count());
  for (const auto& t : doc.tokens()) texts.push_back(t.text);
  return embed_tokens(doc.id(), texts);
}

StoredProvider::StoredProvider(EmbeddingStore store, bool check_offsets)
    : store_(std::move(store)), check_offsets_(check_offsets) {
  if (store_.kind() != StoreKind::kEmbeddings) {
    throw UsageError("stored provider needs an EMBS store");
  }
}

EmbeddingMatrix StoredProvider::embed_document(
    const text::Document& doc) const {
  return store_.matrix_for(doc, check_offsets_);
}

EmbeddingMatrix StoredProvider::embed_tokens(
    std::string doc_id, std::span<const std::string> /*tokens*/) const {
  throw CapabilityError("stored embeddings cannot re-encode edited input (" +
                        doc_id + "); use pooled leave-out mode");
}

std::vector<double> nll_rows_for(const EmbeddingStore& store,
                                 const text::Document& doc) {
  if (store.kind() != StoreKind::kLikelihoods || store.dim() != 1) {
    throw UsageError("likelihood scores need an NLLS store");
  }
  const auto matrix = store.matrix_for(doc);
  return {matrix.values().begin(), matrix.values().end()};
}

}  // namespace noiseguard::embed
