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

#ifndef NOISEGUARD_EMBEDHUB_HPP_
#define NOISEGUARD_EMBEDHUB_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "noiseguard/textcore.hpp"

namespace noiseguard::embed {

// Per-token embeddings of one document, row-major, one row per token.
// Values are kept as 32-bit floats to match the on-disk payload; all
// arithmetic on them is done in double.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::string doc_id, std::size_t dim, std::size_t rows);
  EmbeddingMatrix(std::string doc_id, std::size_t dim,
                  std::vector<float> values);

  const std::string& doc_id() const { return doc_id_; }
  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }

  std::span<const float> row(std::size_t r) const {
    return {values_.data() + r * dim_, dim_};
  }
  std::span<float> row(std::size_t r) {
    return {values_.data() + r * dim_, dim_};
  }
  const std::vector<float>& values() const { return values_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::string doc_id_;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

using PooledVector = std::vector<double>;

// Context-free stand-in for encoder states: the token's FNV-1a-64 hash
// XOR global_seed seeds a splitmix64 stream; component k is the k-th draw
// mapped to [-1, 1), and the vector is L2-normalized.
std::vector<double> reference_embed(std::string_view token_text,
                                    std::size_t dim, std::uint64_t global_seed);

// Mean of rows [token_begin, token_end). Throws DataError on an empty or
// out-of-range span.
PooledVector pool_mean(const EmbeddingMatrix& matrix, std::size_t token_begin,
                       std::size_t token_end);

// Column sums of rows [token_begin, token_end), in double.
std::vector<double> pool_sum(const EmbeddingMatrix& matrix,
                             std::size_t token_begin, std::size_t token_end);

// ---------------------------------------------------------------------------
// Binary stores (EMBS embeddings, NLLS per-token negative log-likelihoods).

enum class StoreKind { kEmbeddings, kLikelihoods };

struct StoreRecord {
  std::string doc_id;
  std::vector<text::CharSpan> offsets;  // one per token
  std::vector<float> values;            // offsets.size() * dim

  std::size_t token_count() const { return offsets.size(); }
  bool operator==(const StoreRecord&) const = default;
};

class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  EmbeddingStore(StoreKind kind, std::uint32_t dim);

  StoreKind kind() const { return kind_; }
  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<StoreRecord>& records() const { return records_; }

  // Throws DataError on duplicate ids or a payload of the wrong size.
  void add(StoreRecord record);
  void add(const EmbeddingMatrix& matrix, const text::Document& doc);

  const StoreRecord* find(std::string_view doc_id) const;

  // Rows of `doc` from the store. Throws DataError when the id is missing,
  // the token count differs, or (if check_offsets) the offsets differ.
  EmbeddingMatrix matrix_for(const text::Document& doc,
                             bool check_offsets = true) const;

  bool operator==(const EmbeddingStore& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ &&
           records_ == other.records_;
  }

 private:
  StoreKind kind_ = StoreKind::kEmbeddings;
  std::uint32_t dim_ = 0;
  std::vector<StoreRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string encode_store(const EmbeddingStore& store);
// Validates magic, version, dtype, lengths and finiteness. Throws DataError.
EmbeddingStore decode_store(std::string_view bytes);

void write_store(const EmbeddingStore& store,
                 const std::filesystem::path& path);
EmbeddingStore read_store(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Providers.

enum class ProviderMode { kContextFree, kStored };

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual ProviderMode mode() const = 0;
  virtual std::size_t dim() const = 0;

  virtual EmbeddingMatrix embed_document(const text::Document& doc) const = 0;

  // Embeds an arbitrary token sequence (used for leave-out re-encoding).
  // Throws CapabilityError for stored providers.
  virtual EmbeddingMatrix embed_tokens(
      std::string doc_id, std::span<const std::string> tokens) const = 0;
};

class ReferenceProvider final : public EmbeddingProvider {
 public:
  ReferenceProvider(std::size_t dim, std::uint64_t global_seed);

  ProviderMode mode() const override { return ProviderMode::kContextFree; }
  std::size_t dim() const override { return dim_; }
  std::uint64_t seed() const { return seed_; }

  EmbeddingMatrix embed_document(const text::Document& doc) const override;
  EmbeddingMatrix embed_tokens(
      std::string doc_id, std::span<const std::string> tokens) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class StoredProvider final : public EmbeddingProvider {
 public:
  explicit StoredProvider(EmbeddingStore store, bool check_offsets = true);

  ProviderMode mode() const override { return ProviderMode::kStored; }
  std::size_t dim() const override { return store_.dim(); }
  const EmbeddingStore& store() const { return store_; }

  EmbeddingMatrix embed_document(const text::Document& doc) const override;
  EmbeddingMatrix embed_tokens(
      std::string doc_id, std::span<const std::string> tokens) const override;

 private:
  EmbeddingStore store_;
  bool check_offsets_;
};

// Per-token NLL column of `doc` from an NLLS store.
std::vector<double> nll_rows_for(const EmbeddingStore& store,
                                 const text::Document& doc);

}  // namespace noiseguard::embed

#endif  // NOISEGUARD_EMBEDHUB_HPP_
