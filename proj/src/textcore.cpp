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

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "noiseguard/error.hpp"

namespace noiseguard::text {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

bool is_terminator_at(std::string_view text, std::size_t i, std::size_t* len) {
  const char c = text[i];
  if (c == '.' || c == '!' || c == '?') {
    *len = 1;
    return true;
  }
  if (text.substr(i, kEllipsis.size()) == kEllipsis) {
    *len = kEllipsis.size();
    return true;
  }
  return false;
}

std::string line_error(std::size_t line_no, const std::string& what) {
  return "corpus line " + std::to_string(line_no) + ": " + what;
}

Document parse_record(std::string_view line, std::size_t line_no) {
  ordered_json record;
  try {
    record = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(line_error(line_no, e.what()));
  }
  if (!record.is_object()) {
    throw DataError(line_error(line_no, "record is not an object"));
  }
  auto id = record.find("id");
  auto body = record.find("text");
  if (id == record.end() || !id->is_string()) {
    throw DataError(line_error(line_no, "missing string field 'id'"));
  }
  if (body == record.end() || !body->is_string()) {
    throw DataError(line_error(line_no, "missing string field 'text'"));
  }

  std::optional<std::string> summary;
  if (auto it = record.find("summary"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw DataError(line_error(line_no, "'summary' must be a string"));
    }
    summary = it->get<std::string>();
  }

  std::optional<std::vector<NoiseSpan>> spans;
  if (auto it = record.find("noise_spans");
      it != record.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw DataError(line_error(line_no, "'noise_spans' must be an array"));
    }
    spans.emplace();
    for (const auto& entry : *it) {
      if (!entry.is_object() || !entry.contains("start") ||
          !entry.contains("end") || !entry["start"].is_number_unsigned() ||
          !entry["end"].is_number_unsigned()) {
        throw DataError(
            line_error(line_no, "noise span needs non-negative start/end"));
      }
      NoiseSpan span;
      span.begin = entry["start"].get<std::size_t>();
      span.end = entry["end"].get<std::size_t>();
      if (auto kind = entry.find("kind"); kind != entry.end()) {
        if (!kind->is_string()) {
          throw DataError(line_error(line_no, "noise span kind not a string"));
        }
        span.kind = kind->get<std::string>();
      }
      spans->push_back(std::move(span));
    }
  }

  try {
    return Document::build(id->get<std::string>(), body->get<std::string>(),
                           std::move(summary), std::move(spans));
  } catch (const DataError& e) {
    throw DataError(line_error(line_no, e.what()));
  }
}

}  // namespace

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    while (i < n && !is_space(text[i])) ++i;
    tokens.push_back(Token{std::string(text.substr(start, i - start)), start, i,
                           false});
  }
  return tokens;
}

std::vector<CharSpan> split_sentences(std::string_view text) {
  std::vector<CharSpan> spans;
  const std::size_t n = text.size();
  std::optional<std::size_t> start;
  std::size_t last_non_space = 0;  // one past the last non-space byte seen

  auto close = [&](std::size_t end) {
    spans.push_back(CharSpan{*start, end});
    start.reset();
  };

  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      if (start) close(last_non_space);
      ++i;
      continue;
    }
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (!start) start = i;
    std::size_t len = 1;
    if (is_terminator_at(text, i, &len)) {
      const std::size_t after = i + len;
      if (after == n || is_space(text[after])) {
        close(after);
        i = after;
        continue;
      }
    }
    i += len;
    last_non_space = i;
  }
  if (start) close(last_non_space);
  return spans;
}

Document Document::build(std::string id, std::string text,
                         std::optional<std::string> summary,
                         std::optional<std::vector<NoiseSpan>> noise_spans) {
  Document doc;
  doc.id_ = std::move(id);
  doc.text_ = std::move(text);
  doc.summary_ = std::move(summary);
  doc.tokens_ = tokenize(doc.text_);

  // Sentence boundaries always fall on whitespace, so each token belongs to
  // exactly one sentence.
  const auto char_spans = split_sentences(doc.text_);
  std::size_t t = 0;
  for (const auto& span : char_spans) {
    const std::size_t first = t;
    while (t < doc.tokens_.size() && doc.tokens_[t].begin < span.end) ++t;
    if (t > first) doc.sentences_.push_back(SentenceSpan{first, t});
  }

  if (noise_spans) {
    for (const auto& span : *noise_spans) {
      if (span.begin >= span.end || span.end > doc.text_.size()) {
        throw DataError("noise span [" + std::to_string(span.begin) + ", " +
                        std::to_string(span.end) +
                        ") is empty or outside the text of '" + doc.id_ + "'");
      }
    }
    for (auto& token : doc.tokens_) {
      token.is_noise = std::any_of(
          noise_spans->begin(), noise_spans->end(), [&](const NoiseSpan& s) {
            return s.begin <= token.begin && token.end <= s.end;
          });
    }
    doc.noise_spans_ = std::move(noise_spans);
  }
  return doc;
}

CharSpan Document::sentence_chars(std::size_t index) const {
  const auto& s = sentences_.at(index);
  return CharSpan{tokens_[s.token_begin].begin, tokens_[s.token_end - 1].end};
}

std::string_view Document::sentence_text(std::size_t index) const {
  const auto chars = sentence_chars(index);
  return std::string_view(text_).substr(chars.begin, chars.end - chars.begin);
}

std::vector<std::size_t> Document::token_sentence_index() const {
  std::vector<std::size_t> owner(tokens_.size());
  for (std::size_t s = 0; s < sentences_.size(); ++s) {
    for (std::size_t k = sentences_[s].token_begin; k < sentences_[s].token_end;
         ++k) {
      owner[k] = s;
    }
  }
  return owner;
}

std::vector<bool> Document::noise_labels() const {
  std::vector<bool> labels(tokens_.size());
  for (std::size_t k = 0; k < tokens_.size(); ++k) {
    labels[k] = tokens_[k].is_noise;
  }
  return labels;
}

Corpus parse_corpus(std::string_view contents) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    Document doc = parse_record(line, line_no);
    if (!seen.insert(doc.id()).second) {
      throw DataError(line_error(line_no, "duplicate id '" + doc.id() + "'"));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_corpus(buffer.str());
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    ordered_json record;
    record["id"] = doc.id();
    record["text"] = doc.text();
    if (doc.summary()) record["summary"] = *doc.summary();
    if (doc.noise_spans()) {
      auto spans = ordered_json::array();
      for (const auto& s : *doc.noise_spans()) {
        spans.push_back(
            ordered_json{{"start", s.begin}, {"end", s.end}, {"kind", s.kind}});
      }
      record["noise_spans"] = std::move(spans);
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus " + path.string());
  out << serialize_corpus(corpus);
  if (!out) throw DataError("write failed for " + path.string());
}

Corpus filter_by_length(const Corpus& corpus, std::size_t max_len) {
  if (max_len == 0) throw UsageError("max_len must be positive");
  const std::size_t limit = max_len / 2;
  Corpus kept;
  for (const auto& doc : corpus.documents) {
    if (doc.token_count() <= limit) kept.documents.push_back(doc);
  }
  return kept;
}

}  // namespace noiseguard::text
