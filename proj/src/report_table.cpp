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
#include <ostream>

#include "json.hpp"
#include "noiseguard/error.hpp"
#include "noiseguard/pipeline.hpp"

namespace noiseguard::pipeline {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "table") return Format::kTable;
  if (name == "jsonl") return Format::kJsonl;
  if (name == "csv") return Format::kCsv;
  throw UsageError("unknown format '" + std::string(name) + "'");
}

void render(const std::vector<Table>& tables, Format format,
            std::ostream& out) {
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& table = tables[t];
    switch (format) {
      case Format::kJsonl:
        for (const auto& row : table.rows) {
          nlohmann::ordered_json j;
          j["table"] = table.name;
          for (std::size_t c = 0; c < table.columns.size(); ++c) {
            j[table.columns[c]] = c < row.size() ? row[c] : "";
          }
          out << j.dump() << '\n';
        }
        break;
      case Format::kCsv: {
        if (t > 0) out << '\n';
        out << "table";
        for (const auto& c : table.columns) out << ',' << csv_field(c);
        out << '\n';
        for (const auto& row : table.rows) {
          out << csv_field(table.name);
          for (const auto& cell : row) out << ',' << csv_field(cell);
          out << '\n';
        }
        break;
      }
      case Format::kTable: {
        if (t > 0) out << '\n';
        std::vector<std::size_t> width(table.columns.size());
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
          width[c] = table.columns[c].size();
          for (const auto& row : table.rows) {
            if (c < row.size()) width[c] = std::max(width[c], row[c].size());
          }
        }
        auto line = [&](const std::vector<std::string>& cells) {
          for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            out << cell;
            if (c + 1 < width.size()) {
              out << std::string(width[c] - cell.size() + 2, ' ');
            }
          }
          out << '\n';
        };
        out << "# " << table.name << '\n';
        line(table.columns);
        for (const auto& row : table.rows) line(row);
        break;
      }
    }
  }
}

}  // namespace noiseguard::pipeline
