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

#ifndef NOISEGUARD_NOISELAB_HPP_
#define NOISEGUARD_NOISELAB_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "noiseguard/textcore.hpp"

namespace noiseguard::noise {

enum class NoiseKind { kCode, kEmoji, kUrl, kRandomSent };

std::string_view to_string(NoiseKind kind);
// Accepts "code", "emoji", "url", "randomsent". Throws UsageError otherwise.
NoiseKind parse_noise_kind(std::string_view name);

struct NoisePool {
  NoiseKind kind = NoiseKind::kCode;
  std::vector<std::string> spans;
};

struct NoiseSpec {
  double amount = 0.5;  // target noisy-token fraction, in (0, 1)
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::kCode;
};

// One span per line; blank lines are dropped and spans are trimmed.
NoisePool load_noise_pool(const std::filesystem::path& path, NoiseKind kind);
NoisePool parse_noise_pool(std::string_view contents, NoiseKind kind);

// Inserts pool spans between the original sentences until the noisy-token
// fraction reaches spec.amount. Each round draws a span index uniformly from
// the pool (with replacement) and then a slot uniformly from the S+1
// boundaries of the original sentence sequence, both from one splitmix64
// stream seeded with spec.seed. Spans landing in the same slot keep their
// insertion order. The original text is kept verbatim; each inserted span is
// joined to the text with a single space.
text::Document inject(const text::Document& doc, const NoisePool& pool,
                      const NoiseSpec& spec);

// Noisy tokens over all tokens. Throws DataError for an empty document.
double noise_fraction(const text::Document& doc);

// Per-document seed used for corpus-level injection.
std::uint64_t derive_document_seed(std::uint64_t global_seed,
                                   std::string_view doc_id);

}  // namespace noiseguard::noise

#endif  // NOISEGUARD_NOISELAB_HPP_
