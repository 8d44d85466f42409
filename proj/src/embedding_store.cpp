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

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "binary_io.hpp"
#include "noiseguard/embedhub.hpp"
#include "noiseguard/error.hpp"

namespace noiseguard::embed {
namespace {

constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 1;

std::string_view magic_for(StoreKind kind) {
  return kind == StoreKind::kEmbeddings ? "EMBS" : "NLLS";
}

using Writer = detail::LeWriter;
using Reader = detail::LeReader;

}  // namespace

EmbeddingStore::EmbeddingStore(StoreKind kind, std::uint32_t dim)
    : kind_(kind), dim_(dim) {
  if (dim_ == 0) throw DataError("store dim must be positive");
  if (kind_ == StoreKind::kLikelihoods && dim_ != 1) {
    throw DataError("NLLS stores have dim 1");
  }
}

void EmbeddingStore::add(StoreRecord record) {
  if (record.values.size() != record.offsets.size() * dim_) {
    throw DataError("record '" + record.doc_id + "' holds " +
                    std::to_string(record.values.size()) + " values, expected " +
                    std::to_string(record.offsets.size() * dim_));
  }
  if (record.doc_id.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw DataError("document id too long for the store format");
  }
  auto [it, inserted] = index_.emplace(record.doc_id, records_.size());
  if (!inserted) {
    throw DataError("duplicate id '" + record.doc_id + "' in store");
  }
  records_.push_back(std::move(record));
}

void EmbeddingStore::add(const EmbeddingMatrix& matrix,
                         const text::Document& doc) {
  if (matrix.rows() != doc.token_count()) {
    throw DataError("matrix for '" + doc.id() + "' has " +
                    std::to_string(matrix.rows()) + " rows, document has " +
                    std::to_string(doc.token_count()) + " tokens");
  }
  if (matrix.dim() != dim_ && matrix.rows() > 0) {
    throw DataError("matrix dim does not match store dim");
  }
  StoreRecord record;
  record.doc_id = doc.id();
  for (const auto& t : doc.tokens()) record.offsets.push_back({t.begin, t.end});
  record.values = matrix.values();
  add(std::move(record));
}

const StoreRecord* EmbeddingStore::find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

EmbeddingMatrix EmbeddingStore::matrix_for(const text::Document& doc,
                                           bool check_offsets) const {
  const StoreRecord* record = find(doc.id());
  if (record == nullptr) {
    throw DataError("store has no record for '" + doc.id() + "'");
  }
  if (record->token_count() != doc.token_count()) {
    throw DataError("store record '" + doc.id() + "' has " +
                    std::to_string(record->token_count()) +
                    " tokens, document has " +
                    std::to_string(doc.token_count()));
  }
  if (check_offsets) {
    for (std::size_t k = 0; k < doc.token_count(); ++k) {
      const auto& t = doc.tokens()[k];
      if (record->offsets[k] != text::CharSpan{t.begin, t.end}) {
        throw DataError("store record '" + doc.id() + "' token " +
                        std::to_string(k) + " offsets disagree with document");
      }
    }
  }
  if (record->values.empty()) return EmbeddingMatrix(doc.id(), dim_, 0);
  return EmbeddingMatrix(doc.id(), dim_, record->values);
}

std::string encode_store(const EmbeddingStore& store) {
  std::string out;
  Writer w(&out);
  w.put_bytes(magic_for(store.kind()));
  w.put<std::uint16_t>(kVersion);
  w.put<std::uint32_t>(store.dim());
  w.put<std::uint8_t>(kDtypeF32);
  w.put<std::uint64_t>(store.size());
  for (const auto& r : store.records()) {
    w.put<std::uint16_t>(static_cast<std::uint16_t>(r.doc_id.size()));
    w.put_bytes(r.doc_id);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(r.token_count()));
    for (const auto& o : r.offsets) {
      w.put<std::uint32_t>(static_cast<std::uint32_t>(o.begin));
      w.put<std::uint32_t>(static_cast<std::uint32_t>(o.end));
    }
    for (float v : r.values) w.put_f32(v);
  }
  return out;
}

EmbeddingStore decode_store(std::string_view bytes) {
  Reader r(bytes);
  const auto magic = r.get_bytes(4);
  StoreKind kind;
  if (magic == "EMBS") {
    kind = StoreKind::kEmbeddings;
  } else if (magic == "NLLS") {
    kind = StoreKind::kLikelihoods;
  } else {
    throw DataError("bad store magic");
  }
  if (const auto version = r.get<std::uint16_t>(); version != kVersion) {
    throw DataError("unsupported store version " + std::to_string(version));
  }
  const auto dim = r.get<std::uint32_t>();
  if (const auto dtype = r.get<std::uint8_t>(); dtype != kDtypeF32) {
    throw DataError("unsupported store dtype " + std::to_string(dtype));
  }
  const auto count = r.get<std::uint64_t>();
  EmbeddingStore store(kind, dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    StoreRecord record;
    const auto id_len = r.get<std::uint16_t>();
    record.doc_id = std::string(r.get_bytes(id_len));
    const auto tokens = r.get<std::uint32_t>();
    // 8 offset bytes + 4*dim payload bytes per token must fit in the rest.
    if (static_cast<std::uint64_t>(tokens) * (8 + 4ULL * dim) > r.remaining()) {
      throw DataError("store record '" + record.doc_id + "' truncated");
    }
    record.offsets.resize(tokens);
    for (auto& o : record.offsets) {
      o.begin = r.get<std::uint32_t>();
      o.end = r.get<std::uint32_t>();
      if (o.begin >= o.end) {
        throw DataError("store record '" + record.doc_id +
                        "' has an empty token span");
      }
    }
    record.values.resize(static_cast<std::size_t>(tokens) * dim);
    for (auto& v : record.values) {
      v = r.get_f32();
      if (!std::isfinite(v)) {
        throw DataError("store record '" + record.doc_id +
                        "' has a non-finite value");
      }
    }
    store.add(std::move(record));
  }
  if (r.remaining() != 0) throw DataError("trailing bytes after store records");
  return store;
}

void write_store(const EmbeddingStore& store,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write store " + path.string());
  const auto bytes = encode_store(store);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

EmbeddingStore read_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open store " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return decode_store(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace noiseguard::embed
