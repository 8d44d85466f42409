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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "noiseguard/error.hpp"
#include "noiseguard/pipeline.hpp"
#include "noiseguard/rng.hpp"

namespace noiseguard::pipeline {
namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

nlohmann::ordered_json to_json(const ArtifactRef& a) {
  return {{"role", a.role},
          {"path", a.file},
          {"bytes", a.bytes},
          {"fnv1a64", a.fingerprint}};
}

ArtifactRef artifact_from_json(const nlohmann::json& j) {
  ArtifactRef a;
  a.role = j.at("role").get<std::string>();
  a.file = j.at("path").get<std::string>();
  a.bytes = j.at("bytes").get<std::uint64_t>();
  a.fingerprint = j.at("fnv1a64").get<std::string>();
  return a;
}

}  // namespace

ArtifactRef describe_artifact(const std::string& role, const path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read artifact " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  return ArtifactRef{role, file.string(), bytes.size(), hex64(fnv1a64(bytes))};
}

std::string config_hash(std::vector<std::pair<std::string, std::string>> kv) {
  std::sort(kv.begin(), kv.end());
  std::string canonical;
  for (const auto& [k, v] : kv) {
    canonical += k;
    canonical += '=';
    canonical += v;
    canonical += '\n';
  }
  return hex64(fnv1a64(canonical));
}

void append_manifest(const path& manifest, const ManifestEntry& entry) {
  for (const auto& o : entry.outputs) {
    if (!std::filesystem::exists(o.file)) {
      throw DataError("manifest output " + o.file + " does not exist");
    }
  }
  nlohmann::ordered_json j;
  j["command"] = entry.command;
  j["config_hash"] = entry.config_hash;
  j["seed"] = entry.seed;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& a : entry.inputs) j["inputs"].push_back(to_json(a));
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& a : entry.outputs) j["outputs"].push_back(to_json(a));
  j["version"] = entry.version;

  std::ofstream out(manifest, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot append to manifest " + manifest.string());
  out << j.dump() << '\n';
}

std::vector<ManifestEntry> read_manifest(const path& manifest) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw DataError("cannot open manifest " + manifest.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.command = j.at("command").get<std::string>();
      e.config_hash = j.at("config_hash").get<std::string>();
      e.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& a : j.at("inputs")) e.inputs.push_back(artifact_from_json(a));
      for (const auto& a : j.at("outputs")) {
        e.outputs.push_back(artifact_from_json(a));
      }
      e.version = j.at("version").get<std::string>();
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw DataError("manifest line " + std::to_string(line_no) + ": " +
                      ex.what());
    }
  }
  return entries;
}

}  // namespace noiseguard::pipeline
