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
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "json.hpp"
#include "noiseguard/error.hpp"
#include "noiseguard/oodstat.hpp"

namespace noiseguard::ood {
namespace {

constexpr std::string_view kModelMagic = "GAUS";
constexpr std::uint16_t kModelVersion = 1;

std::string slurp(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<double> number_array(const nlohmann::json& record,
                                 const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_array()) {
    throw DataError("score line " + std::to_string(line_no) + ": missing '" +
                    key + "'");
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw DataError("score line " + std::to_string(line_no) + ": '" + key +
                      "' holds a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string encode_model(const GaussianModel& model) {
  std::string out;
  detail::LeWriter w(&out);
  w.put_bytes(kModelMagic);
  w.put<std::uint16_t>(kModelVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.dim()));
  w.put<std::uint64_t>(model.sample_count());
  w.put_f64(model.epsilon());
  for (double v : model.mean()) w.put_f64(v);
  for (double v : model.factor()) w.put_f64(v);
  return out;
}

GaussianModel decode_model(std::string_view bytes) {
  detail::LeReader r(bytes);
  if (r.get_bytes(4) != kModelMagic) throw DataError("bad model magic");
  if (const auto version = r.get<std::uint16_t>(); version != kModelVersion) {
    throw DataError("unsupported model version " + std::to_string(version));
  }
  const std::size_t dim = r.get<std::uint32_t>();
  const auto samples = r.get<std::uint64_t>();
  const double epsilon = r.get_f64();
  const std::size_t packed = dim * (dim + 1) / 2;
  if (r.remaining() != 8 * (dim + packed)) {
    throw DataError("model payload size does not match dim " +
                    std::to_string(dim));
  }
  std::vector<double> mean(dim);
  for (auto& v : mean) v = r.get_f64();
  std::vector<double> factor(packed);
  for (auto& v : factor) v = r.get_f64();
  return GaussianModel(std::move(mean), std::move(factor), samples, epsilon);
}

void write_model(const GaussianModel& model,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model " + path.string());
  const auto bytes = encode_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

GaussianModel read_model(const std::filesystem::path& path) {
  try {
    return decode_model(slurp(path, "model"));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_score_sets(std::span<const ScoreSet> sets) {
  std::string out;
  for (const auto& s : sets) {
    nlohmann::ordered_json record;
    record["id"] = s.doc_id;
    record["method"] = std::string(to_string(s.method));
    record["sentence_scores"] = s.sentence_scores;
    record["token_scores"] = s.token_scores;
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::vector<ScoreSet> parse_score_sets(std::string_view contents) {
  std::vector<ScoreSet> sets;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    const auto line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("score line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("method") ||
        !record["method"].is_string()) {
      throw DataError("score line " + std::to_string(line_no) +
                      ": needs string 'id' and 'method'");
    }
    ScoreSet set;
    set.doc_id = record["id"].get<std::string>();
    try {
      set.method = parse_method(record["method"].get<std::string>());
    } catch (const UsageError& e) {
      throw DataError("score line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    set.sentence_scores = number_array(record, "sentence_scores", line_no);
    set.token_scores = number_array(record, "token_scores", line_no);
    sets.push_back(std::move(set));
  }
  return sets;
}

void write_score_sets(std::span<const ScoreSet> sets,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write scores " + path.string());
  out << serialize_score_sets(sets);
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<ScoreSet> read_score_sets(const std::filesystem::path& path) {
  return parse_score_sets(slurp(path, "scores"));
}

}  // namespace noiseguard::ood
