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

#include "noiseguard/noiselab.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "noiseguard/error.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::noise {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && text::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && text::is_space(s.back())) s.remove_suffix(1);
  return s;
}

struct Insertion {
  std::size_t span_index;
  std::size_t token_count;
};

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kCode:
      return "code";
    case NoiseKind::kEmoji:
      return "emoji";
    case NoiseKind::kUrl:
      return "url";
    case NoiseKind::kRandomSent:
      return "randomsent";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (NoiseKind kind : {NoiseKind::kCode, NoiseKind::kEmoji, NoiseKind::kUrl,
                         NoiseKind::kRandomSent}) {
    if (to_string(kind) == name) return kind;
  }
  throw UsageError("unknown noise kind '" + std::string(name) +
                   "' (expected code, emoji, url or randomsent)");
}

NoisePool parse_noise_pool(std::string_view contents, NoiseKind kind) {
  NoisePool pool;
  pool.kind = kind;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    const auto line = trim(contents.substr(pos, eol - pos));
    if (!line.empty()) pool.spans.emplace_back(line);
    pos = eol + 1;
  }
  if (pool.spans.empty()) throw DataError("noise pool is empty");
  return pool;
}

NoisePool load_noise_pool(const std::filesystem::path& path, NoiseKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open noise pool " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_noise_pool(buffer.str(), kind);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

text::Document inject(const text::Document& doc, const NoisePool& pool,
                      const NoiseSpec& spec) {
  if (!(spec.amount > 0.0 && spec.amount < 1.0)) {
    throw UsageError("noise amount must lie in (0, 1)");
  }
  if (pool.spans.empty()) throw DataError("noise pool is empty");
  if (doc.sentence_count() == 0) {
    throw DataError("document '" + doc.id() + "' has no sentences");
  }

  std::vector<std::size_t> span_tokens(pool.spans.size());
  for (std::size_t i = 0; i < pool.spans.size(); ++i) {
    span_tokens[i] = text::tokenize(pool.spans[i]).size();
  }
  if (std::all_of(span_tokens.begin(), span_tokens.end(),
                  [](std::size_t n) { return n == 0; })) {
    throw DataError("every noise pool span is empty after tokenization");
  }

  const std::size_t slots = doc.sentence_count() + 1;
  std::vector<std::vector<Insertion>> by_slot(slots);

  std::size_t noisy = 0;
  for (const auto& t : doc.tokens()) noisy += t.is_noise ? 1 : 0;
  std::size_t total = doc.token_count();

  SplitMix64 rng(spec.seed);
  while (total == 0 || static_cast<double>(noisy) / static_cast<double>(total) <
                           spec.amount) {
    const auto span = static_cast<std::size_t>(rng.uniform(pool.spans.size()));
    const auto slot = static_cast<std::size_t>(rng.uniform(slots));
    // Zero-token spans cannot move the fraction; they are skipped so the
    // loop terminates for mixed pools.
    if (span_tokens[span] == 0) continue;
    by_slot[slot].push_back(Insertion{span, span_tokens[span]});
    noisy += span_tokens[span];
    total += span_tokens[span];
  }

  // Insertion anchors in the original text: slot 0 sits at the start of the
  // first sentence, slot k > 0 at the end of sentence k - 1.
  std::vector<std::size_t> anchor(slots);
  anchor[0] = doc.sentence_chars(0).begin;
  for (std::size_t k = 1; k < slots; ++k) {
    anchor[k] = doc.sentence_chars(k - 1).end;
  }

  const std::string& original = doc.text();
  const std::string kind(to_string(pool.kind));
  std::string out;
  out.reserve(original.size() + 64);
  std::vector<text::NoiseSpan> spans;

  // Maps a byte offset of the original text to the output text.
  std::vector<std::pair<std::size_t, std::size_t>> shifts;  // (anchor, delta)

  std::size_t copied = 0;
  for (std::size_t k = 0; k < slots; ++k) {
    if (by_slot[k].empty()) continue;
    out.append(original, copied, anchor[k] - copied);
    copied = anchor[k];
    const std::size_t before = out.size();
    for (const auto& ins : by_slot[k]) {
      const std::string& body = pool.spans[ins.span_index];
      if (k == 0) {
        spans.push_back({out.size(), out.size() + body.size(), kind});
        out += body;
        out += ' ';
      } else {
        out += ' ';
        spans.push_back({out.size(), out.size() + body.size(), kind});
        out += body;
      }
    }
    shifts.emplace_back(anchor[k], out.size() - before);
  }
  out.append(original, copied, std::string::npos);

  auto shift_of = [&](std::size_t offset, bool is_end) {
    std::size_t delta = 0;
    for (const auto& [at, d] : shifts) {
      // An existing span ending exactly at an anchor stays before the
      // inserted text; one starting there moves after it.
      if (at < offset || (at == offset && !is_end)) delta += d;
    }
    return offset + delta;
  };

  std::vector<text::NoiseSpan> all_spans;
  if (doc.noise_spans()) {
    for (const auto& s : *doc.noise_spans()) {
      all_spans.push_back(
          {shift_of(s.begin, false), shift_of(s.end, true), s.kind});
    }
  }
  all_spans.insert(all_spans.end(), spans.begin(), spans.end());
  std::sort(all_spans.begin(), all_spans.end(),
            [](const text::NoiseSpan& a, const text::NoiseSpan& b) {
              return a.begin < b.begin;
            });

  return text::Document::build(doc.id(), std::move(out), doc.summary(),
                               std::move(all_spans));
}

double noise_fraction(const text::Document& doc) {
  if (doc.token_count() == 0) {
    throw DataError("noise fraction of empty document '" + doc.id() + "'");
  }
  std::size_t noisy = 0;
  for (const auto& t : doc.tokens()) noisy += t.is_noise ? 1 : 0;
  return static_cast<double>(noisy) / static_cast<double>(doc.token_count());
}

std::uint64_t derive_document_seed(std::uint64_t global_seed,
                                   std::string_view doc_id) {
  return global_seed ^ fnv1a64(doc_id);
}

}  // namespace noiseguard::noise
