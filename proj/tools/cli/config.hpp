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

// Experiment configuration: one JSON document.
//
//   {
//     "group":   {"kind": "Z", "rank": 1},        // Z | Zm | free | lamplighter
//     "mode":    "exact",                         // exact | float
//     "measure": {"1": "1/2", "-1": "1/2"},       // element literal -> weight
//     "rule":    {"type": "first_increment", "set": ["-1"]},
//     "engine":  "exact",                         // exact | montecarlo
//     "epsilon": "1/1048576",
//     "max_horizon": 10000, "samples": 100000, "seed": 1, "workers": 1,
//     "output":  "out/"
//   }
//
// Rules: constant {n}, first_visit {set}, first_increment {set},
// sequential {rules: [...]}, aux_convex {points: {value: weight}},
// beta_flag {fraction: {element: fraction}, coupled}.
// Verification uses "bundle" and "ray_samples"; entropy uses "max_n".

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "boundary_walk/extended.hpp"
#include "boundary_walk/group.hpp"
#include "boundary_walk/measure.hpp"
#include "boundary_walk/stopping.hpp"

namespace boundary_walk::cli {

// Invalid configuration. Line and column are 1-based; zero when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0,
              std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ExperimentConfig {
  std::string source;  // raw text, for diagnostics
  GroupSpec group = GroupSpec::lattice(1);
  Arithmetic mode = Arithmetic::kExact;
  std::vector<std::pair<std::string, std::string>> measure;
  nlohmann::json rule;
  std::string engine = "exact";
  std::optional<std::string> epsilon;
  std::size_t max_horizon = kDefaultMaxHorizon;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::optional<std::string> output;
  std::optional<std::string> bundle;
  std::size_t ray_samples = 20000;
  std::size_t max_n = 6;
};

// Syntax and shape checks only; literals are interpreted by the builders.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

nlohmann::json group_to_json(const GroupSpec& group);
GroupSpec group_from_json(const nlohmann::json& j);

// Module inputs built from a config.
struct Experiment {
  FiniteMeasure mu;
  StoppingRule rule;
  std::optional<AuxSpace> aux;
  Scalar epsilon;
  bool coupled = false;
};

FiniteMeasure build_measure(const ExperimentConfig& config);
Experiment build_experiment(const ExperimentConfig& config);

}  // namespace boundary_walk::cli
