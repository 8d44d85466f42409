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

#ifndef NOISEGUARD_TEXTCORE_HPP_
#define NOISEGUARD_TEXTCORE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace noiseguard::text {

// A whitespace-delimited word. Offsets are UTF-8 byte offsets into the
// owning document's text, [begin, end).
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool is_noise = false;

  bool operator==(const Token&) const = default;
};

// Half-open range of token indices.
struct SentenceSpan {
  std::size_t token_begin = 0;
  std::size_t token_end = 0;

  std::size_t size() const { return token_end - token_begin; }
  bool operator==(const SentenceSpan&) const = default;
};

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan&) const = default;
};

// Byte range of injected (or externally labelled) noise.
struct NoiseSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string kind;

  bool operator==(const NoiseSpan&) const = default;
};

// Document with derived token/sentence structure. Construct through
// Document::build so that tokens, sentences and noise labels are always
// consistent with the text.
class Document {
 public:
  Document() = default;

  // Tokenizes, segments and labels `text`. Throws DataError if a noise span
  // lies outside the text or is empty.
  static Document build(std::string id, std::string text,
                        std::optional<std::string> summary = std::nullopt,
                        std::optional<std::vector<NoiseSpan>> noise_spans =
                            std::nullopt);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<SentenceSpan>& sentences() const { return sentences_; }
  const std::optional<std::string>& summary() const { return summary_; }
  const std::optional<std::vector<NoiseSpan>>& noise_spans() const {
    return noise_spans_;
  }

  std::size_t token_count() const { return tokens_.size(); }
  std::size_t sentence_count() const { return sentences_.size(); }

  // Byte range covered by sentence `index`, first token start to last token
  // end.
  CharSpan sentence_chars(std::size_t index) const;
  std::string_view sentence_text(std::size_t index) const;

  // Index of the sentence holding each token.
  std::vector<std::size_t> token_sentence_index() const;

  std::vector<bool> noise_labels() const;

  bool operator==(const Document&) const = default;

 private:
  std::string id_;
  std::string text_;
  std::vector<Token> tokens_;
  std::vector<SentenceSpan> sentences_;
  std::optional<std::string> summary_;
  std::optional<std::vector<NoiseSpan>> noise_spans_;
};

struct Corpus {
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  bool operator==(const Corpus&) const = default;
};

bool is_space(char c);

// Maximal runs of non-whitespace bytes. ASCII whitespace only.
std::vector<Token> tokenize(std::string_view text);

// Rule-based segmentation: a sentence ends after '.', '!', '?' or U+2026
// when followed by whitespace or end of text, and at every newline.
// Returned spans are trimmed of surrounding whitespace.
std::vector<CharSpan> split_sentences(std::string_view text);

// Line-delimited JSON records: id, text, optional summary and noise_spans.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view contents);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string serialize_corpus(const Corpus& corpus);

// Keeps documents with at most max_len / 2 tokens.
Corpus filter_by_length(const Corpus& corpus, std::size_t max_len);

}  // namespace noiseguard::text

#endif  // NOISEGUARD_TEXTCORE_HPP_
