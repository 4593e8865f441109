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

// Result files. A measure table is a CSV
//
//   element,weight,weight_decimal,cumulative
//
// in canonical element order, LF line endings, fields quoted when they
// contain commas. Exact weights are "num/den". Each table has a JSON
// sidecar (same stem, .json) that names the group and the run metadata.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "boundary_walk/measure.hpp"
#include "boundary_walk/verification.hpp"

namespace boundary_walk::cli {

std::string measure_csv(const FiniteMeasure& mu);

// Throws ParseError on malformed tables.
FiniteMeasure parse_measure_csv(const GroupSpec& group, Arithmetic mode,
                                std::string_view text);

struct MeasureFile {
  GroupSpec group;
  Arithmetic mode = Arithmetic::kExact;
  FiniteMeasure measure;
  nlohmann::json metadata;
};

// Reads table plus sidecar. Throws ConfigError when either is unreadable or
// malformed.
MeasureFile read_measure_file(const std::string& csv_path);

// Sidecar path for a table path: "dir/mu_T.csv" -> "dir/mu_T.json".
std::string sidecar_path(const std::string& csv_path);

nlohmann::json report_json(const std::vector<CheckReport>& reports);

std::string read_file(const std::string& path);
// Writes bytes verbatim, creating parent directories.
void write_file(const std::string& path, std::string_view bytes);

}  // namespace boundary_walk::cli
