// Copyright 2026 The Boundary Walk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tables.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "boundary_walk/error.hpp"
#include "boundary_walk/text.hpp"
#include "config.hpp"

namespace boundary_walk::cli {

namespace {

constexpr std::string_view kHeader = "element,weight,weight_decimal,cumulative";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record; `line` is used for error columns.
std::vector<std::string> split_record(std::string_view line,
                                      std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    throw ParseError("unterminated quote on line " + std::to_string(line_no),
                     line.size());
  }
  return fields;
}

}  // namespace

std::string measure_csv(const FiniteMeasure& mu) {
  std::string out(kHeader);
  out += '\n';
  Scalar running = Scalar::zero(mu.arithmetic());
  for (const auto& [g, w] : mu) {
    running += w;
    out += csv_field(format_element(g));
    out += ',';
    out += w.to_string();
    out += ',';
    out += w.to_decimal();
    out += ',';
    out += running.to_string();
    out += '\n';
  }
  return out;
}

FiniteMeasure parse_measure_csv(const GroupSpec& group, Arithmetic mode,
                                std::string_view text) {
  FiniteMeasure mu(group, mode);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kHeader) throw ParseError("unexpected table header", 1);
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_record(line, line_no);
    if (fields.size() != 4) {
      throw ParseError("line " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected 4",
                       1);
    }
    mu.add(parse_element(group, fields[0]), parse_scalar(mode, fields[1]));
  }
  if (line_no == 0) throw ParseError("empty table", 1);
  return mu;
}

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  return p.string();
}

MeasureFile read_measure_file(const std::string& csv_path) {
  nlohmann::json meta;
  const std::string side = sidecar_path(csv_path);
  try {
    meta = nlohmann::json::parse(read_file(side));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad sidecar " + side + ": " + e.what());
  }
  if (!meta.is_object() || !meta.contains("group") || !meta.contains("mode")) {
    throw ConfigError("sidecar " + side + " lacks group or mode");
  }
  const GroupSpec group = group_from_json(meta.at("group"));
  const std::string mode_name = meta.at("mode").get<std::string>();
  const Arithmetic mode =
      mode_name == "float" ? Arithmetic::kFloat : Arithmetic::kExact;
  try {
    FiniteMeasure mu = parse_measure_csv(group, mode, read_file(csv_path));
    return {group, mode, std::move(mu), std::move(meta)};
  } catch (const Error& e) {
    throw ConfigError(csv_path + ": " + e.what());
  }
}

nlohmann::json report_json(const std::vector<CheckReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) {
    out.push_back({{"name", r.name},
                   {"points", r.points},
                   {"residual", r.residual},
                   {"tolerance", r.tolerance},
                   {"status", std::string(to_string(r.status))},
                   {"pass", r.passed()},
                   {"seeds", r.seeds},
                   {"detail", r.detail}});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace boundary_walk::cli
