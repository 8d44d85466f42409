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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <numeric>

#include "noiseguard/error.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::embed {
namespace {

using text::Document;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

TEST(HashTest, FrozenValues) {
  EXPECT_EQ(fnv1a64("alpha"), 0x8ac625bb85ed202bULL);
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
}

TEST(ReferenceEmbedTest, MatchesIndependentImplementation) {
  const auto alpha = reference_embed("alpha", 64, 0);
  ASSERT_EQ(alpha.size(), 64u);
  EXPECT_NEAR(alpha[0], -0.18164006112717376, 1e-15);
  EXPECT_NEAR(alpha[1], 0.028773837810322268, 1e-15);
  EXPECT_NEAR(alpha[2], 0.14940710555471814, 1e-15);

  const std::vector<double> hello = {
      0.18655051412980256,  0.5048283264161503,  0.41790539244898967,
      0.2926173588094611,   -0.34040484013318745, 0.44989828547990557,
      -0.2964768036982954, -0.2095113677493158};
  const auto got = reference_embed("h\xC3\xA9llo", 8, 42);
  ASSERT_EQ(got.size(), hello.size());
  for (std::size_t k = 0; k < hello.size(); ++k) {
    EXPECT_NEAR(got[k], hello[k], 1e-15) << k;
  }
}

TEST(ReferenceEmbedTest, DistinctTokensNearlyOrthogonal) {
  const auto a = reference_embed("alpha", 64, 0);
  const auto b = reference_embed("beta", 64, 0);
  EXPECT_NEAR(dot(a, b), 0.05536385675717804, 1e-14);
  EXPECT_LT(std::abs(dot(a, b)), 0.5);
}

TEST(ReferenceEmbedTest, UnitNormAndDeterministic) {
  for (const char* tok : {"a", "the", "}", "\xF0\x9F\x98\x80", ""}) {
    const auto v = reference_embed(tok, 33, 9);
    EXPECT_NEAR(std::sqrt(dot(v, v)), 1.0, 1e-9);
    EXPECT_EQ(v, reference_embed(tok, 33, 9));
  }
  EXPECT_NE(reference_embed("a", 16, 1), reference_embed("a", 16, 2));
  EXPECT_THROW(reference_embed("a", 1, 0), UsageError);
}

TEST(PoolTest, Examples) {
  EmbeddingMatrix m("d", 2, std::vector<float>{1, 0, 0, 1});
  EXPECT_EQ(pool_mean(m, 0, 2), (PooledVector{0.5, 0.5}));
  EXPECT_EQ(pool_mean(m, 1, 2), (PooledVector{0.0, 1.0}));
  EXPECT_EQ(pool_sum(m, 0, 2), (std::vector<double>{1.0, 1.0}));
  EXPECT_THROW(pool_mean(m, 1, 1), DataError);
  EXPECT_THROW(pool_mean(m, 0, 3), DataError);
}

TEST(PoolTest, FullMeanIsWeightedSentenceMean) {
  SplitMix64 rng(5);
  const ReferenceProvider provider(24, 3);
  for (int trial = 0; trial < 50; ++trial) {
    std::string s;
    const auto n = 1 + rng.uniform(40);
    for (std::uint64_t i = 0; i < n; ++i) {
      s += "t" + std::to_string(rng.uniform(15));
      s += rng.uniform(4) == 0 ? ". " : " ";
    }
    const auto doc = Document::build("d", s);
    const auto m = provider.embed_document(doc);
    const auto full = pool_mean(m, 0, m.rows());
    std::vector<double> weighted(m.dim(), 0.0);
    for (const auto& sent : doc.sentences()) {
      const auto p = pool_mean(m, sent.token_begin, sent.token_end);
      for (std::size_t k = 0; k < p.size(); ++k) {
        weighted[k] += p[k] * static_cast<double>(sent.size());
      }
    }
    for (std::size_t k = 0; k < full.size(); ++k) {
      const double w = weighted[k] / static_cast<double>(m.rows());
      ASSERT_NEAR(w, full[k], 1e-12 * std::max(1.0, std::abs(full[k])));
    }
  }
}

TEST(ProviderTest, ReferenceRowsFollowTokens) {
  const ReferenceProvider provider(8, 1);
  const auto doc = Document::build("d", "b a c");
  const auto perm = Document::build("p", "c b a");
  const auto m = provider.embed_document(doc);
  const auto q = provider.embed_document(perm);
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_TRUE(std::equal(m.row(0).begin(), m.row(0).end(), q.row(1).begin()));
  EXPECT_TRUE(std::equal(m.row(1).begin(), m.row(1).end(), q.row(2).begin()));
  EXPECT_TRUE(std::equal(m.row(2).begin(), m.row(2).end(), q.row(0).begin()));
  const auto row = reference_embed("a", 8, 1);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(m.row(1)[k], static_cast<float>(row[k]));
  }
  EXPECT_EQ(provider.embed_document(Document::build("e", "")).rows(), 0u);
  const std::vector<std::string> tokens = {"b", "c"};
  EXPECT_EQ(provider.embed_tokens("x", tokens).values(),
            provider.embed_document(Document::build("x", "b c")).values());
}

EmbeddingStore store_for(const std::vector<Document>& docs, std::size_t dim) {
  const ReferenceProvider provider(dim, 11);
  EmbeddingStore store(StoreKind::kEmbeddings, static_cast<std::uint32_t>(dim));
  for (const auto& d : docs) store.add(provider.embed_document(d), d);
  return store;
}

TEST(StoreTest, RoundTripIsExact) {
  const std::vector<Document> docs = {Document::build("a", "one two. three"),
                                      Document::build("b", ""),
                                      Document::build("\xC3\xA9t\xC3\xA9", "x")};
  const auto store = store_for(docs, 5);
  const auto bytes = encode_store(store);
  const auto back = decode_store(bytes);
  EXPECT_EQ(back, store);
  EXPECT_EQ(encode_store(back), bytes);

  const auto file = std::filesystem::temp_directory_path() / "ng_store.embs";
  write_store(store, file);
  EXPECT_EQ(read_store(file), store);
  std::filesystem::remove(file);
}

TEST(StoreTest, HeaderLayout) {
  EmbeddingStore store(StoreKind::kLikelihoods, 1);
  store.add({"ab", {{0, 1}}, {2.5f}});
  const auto bytes = encode_store(store);
  // magic 4 + version 2 + dim 4 + dtype 1 + count 8 + id len 2 + id 2 +
  // token count 4 + offsets 8 + values 4.
  ASSERT_EQ(bytes.size(), 39u);
  EXPECT_EQ(bytes.substr(0, 4), "NLLS");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 1);
  EXPECT_EQ(bytes[10], 1);
  EXPECT_EQ(bytes[11], 1);
  EXPECT_EQ(bytes.substr(19, 2), std::string("\x02\x00", 2));
  EXPECT_EQ(bytes.substr(21, 2), "ab");
}

TEST(StoreTest, CorruptInputsRejected) {
  const auto bytes = encode_store(store_for({Document::build("a", "x y")}, 3));
  EXPECT_THROW(decode_store(""), DataError);
  EXPECT_THROW(decode_store("EMBX" + bytes.substr(4)), DataError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW(decode_store(bad_version), DataError);
  auto bad_dtype = bytes;
  bad_dtype[10] = 2;
  EXPECT_THROW(decode_store(bad_dtype), DataError);
  EXPECT_THROW(decode_store(bytes.substr(0, bytes.size() - 1)), DataError);
  EXPECT_THROW(decode_store(bytes + "x"), DataError);
  auto nan = bytes;
  const float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + nan.size() - 4, &q, 4);
  EXPECT_THROW(decode_store(nan), DataError);
  EXPECT_THROW(read_store("/nonexistent/store.embs"), DataError);
}

TEST(StoreTest, AddValidation) {
  EmbeddingStore store(StoreKind::kEmbeddings, 2);
  store.add({"a", {{0, 1}}, {1.0f, 2.0f}});
  EXPECT_THROW(store.add({"a", {{0, 1}}, {1.0f, 2.0f}}), DataError);
  EXPECT_THROW(store.add({"b", {{0, 1}}, {1.0f}}), DataError);
  EXPECT_THROW(EmbeddingStore(StoreKind::kLikelihoods, 2), DataError);
  EXPECT_THROW(EmbeddingStore(StoreKind::kEmbeddings, 0), DataError);
  EXPECT_NE(store.find("a"), nullptr);
  EXPECT_EQ(store.find("zz"), nullptr);
}

TEST(StoreTest, AlignmentErrors) {
  const auto doc = Document::build("d", "a b c d e f g");
  const auto store = store_for({doc}, 4);
  const StoredProvider provider(store);
  EXPECT_EQ(provider.embed_document(doc).rows(), 7u);
  EXPECT_THROW(provider.embed_document(Document::build("d", "a b c d e f g h")),
               DataError);
  EXPECT_THROW(provider.embed_document(Document::build("other", "a")), DataError);
  const auto shifted = Document::build("d", "a  b c d e f g");
  EXPECT_THROW(provider.embed_document(shifted), DataError);
  EXPECT_EQ(StoredProvider(store, false).embed_document(shifted).rows(), 7u);
  const std::vector<std::string> tokens = {"a"};
  EXPECT_THROW(provider.embed_tokens("d", tokens), CapabilityError);
}

TEST(StoreTest, LikelihoodRows) {
  const auto doc = Document::build("d", "a b. c");
  EmbeddingStore nll(StoreKind::kLikelihoods, 1);
  nll.add({"d", {{0, 1}, {2, 4}, {5, 6}}, {1.5f, 2.0f, 0.25f}});
  EXPECT_EQ(nll_rows_for(nll, doc), (std::vector<double>{1.5, 2.0, 0.25}));
  EXPECT_THROW(nll_rows_for(store_for({doc}, 2), doc), UsageError);
  EXPECT_THROW(StoredProvider{nll}, UsageError);
}

}  // namespace
}  // namespace noiseguard::embed
