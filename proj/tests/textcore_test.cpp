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

#include "noiseguard/textcore.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "noiseguard/error.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::text {
namespace {

using ::testing::TestWithParam;

TEST(TokenizeTest, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(TokenizeTest, SingletonRuns) {
  const auto t = tokenize("a b");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], (Token{"a", 0, 1, false}));
  EXPECT_EQ(t[1], (Token{"b", 2, 3, false}));
}

TEST(TokenizeTest, Utf8ByteOffsets) {
  // "é" is two bytes, so "héllo" spans bytes [0, 6).
  const auto t = tokenize("h\xC3\xA9llo  x");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], (Token{"h\xC3\xA9llo", 0, 6, false}));
  EXPECT_EQ(t[1], (Token{"x", 8, 9, false}));
}

TEST(TokenizeTest, OnlyWhitespace) { EXPECT_TRUE(tokenize(" \t\n ").empty()); }

TEST(SplitSentencesTest, Terminators) {
  EXPECT_EQ(split_sentences("Hi. Go!"),
            (std::vector<CharSpan>{{0, 3}, {4, 7}}));
}

TEST(SplitSentencesTest, NoTerminator) {
  EXPECT_EQ(split_sentences("one two"), (std::vector<CharSpan>{{0, 7}}));
}

TEST(SplitSentencesTest, NewlineAfterTerminator) {
  EXPECT_EQ(split_sentences("A.\nB."), (std::vector<CharSpan>{{0, 2}, {3, 5}}));
}

TEST(SplitSentencesTest, NewlineEndsUnterminatedSentence) {
  EXPECT_EQ(split_sentences("x = 1\ny = 2 "),
            (std::vector<CharSpan>{{0, 5}, {6, 11}}));
}

TEST(SplitSentencesTest, TerminatorInsideWordDoesNotSplit) {
  EXPECT_EQ(split_sentences("see www.example.com now"),
            (std::vector<CharSpan>{{0, 23}}));
}

TEST(SplitSentencesTest, Ellipsis) {
  EXPECT_EQ(split_sentences("Wait\xE2\x80\xA6 then"),
            (std::vector<CharSpan>{{0, 7}, {8, 12}}));
}

TEST(SplitSentencesTest, LeadingWhitespaceTrimmed) {
  EXPECT_EQ(split_sentences("  Hi?  "), (std::vector<CharSpan>{{2, 5}}));
  EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(DocumentTest, SentencesPartitionTokens) {
  const auto doc = Document::build("d", "Hi there. Go now!\nThird line");
  ASSERT_EQ(doc.sentence_count(), 3u);
  EXPECT_EQ(doc.sentences()[0], (SentenceSpan{0, 2}));
  EXPECT_EQ(doc.sentences()[1], (SentenceSpan{2, 4}));
  EXPECT_EQ(doc.sentences()[2], (SentenceSpan{4, 6}));
  EXPECT_EQ(doc.sentence_text(1), "Go now!");
}

TEST(DocumentTest, NoiseLabelsFollowSpans) {
  const auto doc = Document::build("d", "a b c d", std::nullopt,
                                   std::vector<NoiseSpan>{{2, 5, "code"}});
  EXPECT_EQ(doc.noise_labels(), (std::vector<bool>{false, true, true, false}));
}

TEST(DocumentTest, NoiseSpanOutsideTextRejected) {
  EXPECT_THROW(Document::build("d", "ab", std::nullopt,
                               std::vector<NoiseSpan>{{1, 5, "url"}}),
               DataError);
}

TEST(CorpusIoTest, EmptyFile) { EXPECT_TRUE(parse_corpus("").empty()); }

TEST(CorpusIoTest, SingleRecord) {
  const auto c = parse_corpus(R"({"id":"d1","text":"Hi."})");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.documents[0].token_count(), 1u);
  EXPECT_EQ(c.documents[0].sentence_count(), 1u);
  EXPECT_FALSE(c.documents[0].summary().has_value());
}

TEST(CorpusIoTest, DuplicateIdsRejected) {
  try {
    parse_corpus("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CorpusIoTest, MalformedLineNamesLineNumber) {
  try {
    parse_corpus("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":3}\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_corpus("not json\n"), DataError);
}

TEST(CorpusIoTest, UnknownFieldsIgnoredAndDropped) {
  const auto c =
      parse_corpus(R"({"id":"a","extra":[1,2],"text":"x y","summary":"s"})");
  EXPECT_EQ(serialize_corpus(c),
            "{\"id\":\"a\",\"text\":\"x y\",\"summary\":\"s\"}\n");
}

TEST(CorpusIoTest, FileRoundTrip) {
  Corpus c;
  c.documents.push_back(Document::build(
      "n1", "Caf\xC3\xA9 time. x = 1 Done.", "sum",
      std::vector<NoiseSpan>{{12, 17, "code"}}));
  c.documents.push_back(Document::build("n2", "", std::nullopt,
                                        std::vector<NoiseSpan>{}));
  const auto file =
      std::filesystem::temp_directory_path() / "noiseguard_corpus_rt.jsonl";
  write_corpus(c, file);
  EXPECT_EQ(load_corpus(file), c);
  std::filesystem::remove(file);
}

TEST(FilterByLengthTest, HalfOfMaximumBoundary) {
  auto words = [](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += "w ";
    return s;
  };
  Corpus c;
  c.documents.push_back(Document::build("keep", words(256)));
  c.documents.push_back(Document::build("drop", words(257)));
  const auto kept = filter_by_length(c, 512);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept.documents[0].id(), "keep");
  EXPECT_EQ(filter_by_length(kept, 512), kept);
  EXPECT_TRUE(filter_by_length(Corpus{}, 512).empty());
  EXPECT_THROW(filter_by_length(c, 0), UsageError);
}

// Random texts over an alphabet heavy in whitespace and terminators.
std::string random_text(SplitMix64& rng, std::size_t len) {
  static const std::vector<std::string> pieces = {
      "a", "b", "Z", " ", " ", "\n", ".", "!", "?", "\t", "\xE2\x80\xA6",
      "\xC3\xA9", "x", "1"};
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += pieces[rng.uniform(pieces.size())];
  return s;
}

TEST(TextPropertyTest, TokensAndSentencesAreConsistent) {
  SplitMix64 rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const auto text = random_text(rng, rng.uniform(40));
    const auto doc = Document::build("p", text);
    std::size_t prev_end = 0;
    std::string nonspace;
    for (const auto& t : doc.tokens()) {
      ASSERT_LT(t.begin, t.end);
      ASSERT_GE(t.begin, prev_end);
      ASSERT_EQ(text.substr(t.begin, t.end - t.begin), t.text);
      prev_end = t.end;
      nonspace += t.text;
    }
    std::string expected;
    for (char c : text) {
      if (!is_space(c)) expected += c;
    }
    ASSERT_EQ(nonspace, expected);

    std::size_t next = 0;
    for (const auto& s : doc.sentences()) {
      ASSERT_EQ(s.token_begin, next);
      ASSERT_LT(s.token_begin, s.token_end);
      next = s.token_end;
    }
    ASSERT_EQ(next, doc.token_count());

    // Re-tokenizing the space-joined tokens is idempotent.
    std::string joined;
    for (const auto& t : doc.tokens()) joined += t.text + " ";
    const auto again = tokenize(joined);
    ASSERT_EQ(again.size(), doc.token_count());
  }
}

TEST(TextPropertyTest, CorpusRoundTripIsIdentity) {
  SplitMix64 rng(99);
  Corpus c;
  for (int i = 0; i < 50; ++i) {
    auto text = random_text(rng, 1 + rng.uniform(30));
    std::optional<std::vector<NoiseSpan>> spans;
    if (i % 2 == 0) {
      spans.emplace();
      const auto toks = tokenize(text);
      if (!toks.empty()) spans->push_back({toks[0].begin, toks[0].end, "emoji"});
    }
    std::optional<std::string> summary;
    if (i % 3 == 0) summary = "s" + std::to_string(i);
    c.documents.push_back(
        Document::build("d" + std::to_string(i), text, summary, spans));
  }
  EXPECT_EQ(parse_corpus(serialize_corpus(c)), c);
}

}  // namespace
}  // namespace noiseguard::text
