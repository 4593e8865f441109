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

#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "boundary_walk/error.hpp"
#include "boundary_walk/text.hpp"

namespace boundary_walk::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys = {
    "group",   "mode",    "measure", "rule",   "engine",      "epsilon",
    "max_horizon", "samples", "seed", "workers", "output", "bundle",
    "ray_samples", "max_n"};

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// Error pointing into the first occurrence of the quoted literal.
[[noreturn]] void fail_at(const std::string& source, const std::string& literal,
                          std::size_t column_in_literal,
                          const std::string& message) {
  const std::string quoted = json(literal).dump();
  const std::size_t at = source.find(quoted);
  if (at == std::string::npos) throw ConfigError(message);
  const std::size_t offset = at + 1 + (column_in_literal ? column_in_literal - 1 : 0);
  const auto [line, column] = line_column(source, offset);
  throw ConfigError(message, line, column);
}

std::string literal_text(const json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

template <typename T>
T unsigned_field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(std::string("\"") + key +
                      "\" must be a nonnegative integer");
  }
  return v.get<T>();
}

Arithmetic parse_mode(const std::string& s) {
  if (s == "exact") return Arithmetic::kExact;
  if (s == "float") return Arithmetic::kFloat;
  throw ConfigError("mode must be \"exact\" or \"float\", got \"" + s + "\"");
}

GroupElement element_at(const ExperimentConfig& config,
                        const std::string& literal) {
  try {
    return parse_element(config.group, literal);
  } catch (const ParseError& e) {
    fail_at(config.source, literal, e.column(), e.what());
  }
}

Scalar scalar_at(const ExperimentConfig& config, const std::string& literal,
                 Arithmetic mode) {
  try {
    return parse_scalar(mode, literal);
  } catch (const ParseError& e) {
    fail_at(config.source, literal, e.column(), e.what());
  }
}

std::set<GroupElement> element_set(const ExperimentConfig& config,
                                   const json& rule) {
  if (!rule.contains("set") || !rule.at("set").is_array() ||
      rule.at("set").empty()) {
    throw ConfigError("rule \"" + rule.value("type", "") +
                      "\" needs a nonempty \"set\" array");
  }
  std::set<GroupElement> out;
  for (const auto& item : rule.at("set")) {
    out.insert(element_at(config, literal_text(item)));
  }
  return out;
}

StoppingRule plain_rule(const ExperimentConfig& config, const json& rule) {
  if (!rule.is_object() || !rule.contains("type") ||
      !rule.at("type").is_string()) {
    throw ConfigError("rule must be an object with a \"type\"");
  }
  const std::string type = rule.at("type").get<std::string>();
  if (type == "constant") {
    if (!rule.contains("n") || !rule.at("n").is_number_integer() ||
        rule.at("n").get<std::int64_t>() < 1) {
      throw ConfigError("constant rule needs an integer \"n\" >= 1");
    }
    return constant_rule(rule.at("n").get<std::size_t>());
  }
  if (type == "first_visit") return first_visit_rule(element_set(config, rule));
  if (type == "first_increment") {
    return first_increment_rule(element_set(config, rule));
  }
  if (type == "sequential") {
    if (!rule.contains("rules") || !rule.at("rules").is_array() ||
        rule.at("rules").empty()) {
      throw ConfigError("sequential rule needs a nonempty \"rules\" array");
    }
    const json& parts = rule.at("rules");
    StoppingRule out = plain_rule(config, parts.at(0));
    for (std::size_t i = 1; i < parts.size(); ++i) {
      out = sequential_compose(out, plain_rule(config, parts.at(i)));
    }
    return out;
  }
  if (type == "aux_convex" || type == "beta_flag") {
    throw ConfigError("rule \"" + type + "\" cannot be nested");
  }
  fail_at(config.source, type, 1, "unknown rule type \"" + type + "\"");
}

}  // namespace

json group_to_json(const GroupSpec& group) {
  switch (group.kind) {
    case GroupKind::kLattice:
      return {{"kind", "Z"}, {"rank", group.rank}};
    case GroupKind::kCyclic:
      return {{"kind", "Zm"}, {"modulus", group.modulus}};
    case GroupKind::kFree:
      return {{"kind", "free"}, {"rank", group.rank}};
    case GroupKind::kLamplighter:
      return {{"kind", "lamplighter"}, {"rank", group.rank}};
  }
  return {};
}

GroupSpec group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("\"group\" must be an object with a \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "Z") return GroupSpec::lattice(unsigned_field<int>(j, "rank", 1));
    if (kind == "Zm") {
      return GroupSpec::cyclic(unsigned_field<std::int64_t>(j, "modulus", 0));
    }
    if (kind == "free") return GroupSpec::free(unsigned_field<int>(j, "rank", 2));
    if (kind == "lamplighter") {
      return GroupSpec::lamplighter(unsigned_field<int>(j, "rank", 1));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("bad group: ") + e.what());
  }
  throw ConfigError("unknown group kind \"" + kind +
                    "\" (expected Z, Zm, free or lamplighter)");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  config.source = std::string(text);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_column(text, offset);
    std::string what = e.what();
    if (what.rfind("[json.exception", 0) == 0) {
      what = what.substr(what.find("] ") + 2);
    }
    throw ConfigError(what, line, column);
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object", 1, 1);
  for (const auto& [key, value] : doc.items()) {
    if (!kTopLevelKeys.count(key)) {
      fail_at(config.source, key, 1, "unknown config key \"" + key + "\"");
    }
  }

  if (doc.contains("group")) config.group = group_from_json(doc.at("group"));
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw ConfigError("mode must be a string");
    config.mode = parse_mode(doc.at("mode").get<std::string>());
  }
  if (doc.contains("measure")) {
    const json& m = doc.at("measure");
    if (!m.is_object()) {
      throw ConfigError("\"measure\" must map element literals to weights");
    }
    for (const auto& [element, weight] : m.items()) {
      if (!weight.is_string() && !weight.is_number()) {
        fail_at(config.source, element, 1,
                "weight of \"" + element + "\" must be a string or number");
      }
      config.measure.emplace_back(element, literal_text(weight));
    }
  }
  if (doc.contains("rule")) config.rule = doc.at("rule");
  if (doc.contains("engine")) {
    config.engine = doc.at("engine").is_string()
                        ? doc.at("engine").get<std::string>()
                        : std::string();
    if (config.engine != "exact" && config.engine != "montecarlo") {
      throw ConfigError("engine must be \"exact\" or \"montecarlo\"");
    }
  }
  if (doc.contains("epsilon")) {
    const json& e = doc.at("epsilon");
    if (!e.is_string() && !e.is_number()) {
      throw ConfigError("epsilon must be a string or number");
    }
    config.epsilon = literal_text(e);
  }
  config.max_horizon = unsigned_field(doc, "max_horizon", config.max_horizon);
  config.samples = unsigned_field(doc, "samples", config.samples);
  config.seed = unsigned_field(doc, "seed", config.seed);
  config.workers = unsigned_field(doc, "workers", config.workers);
  config.ray_samples = unsigned_field(doc, "ray_samples", config.ray_samples);
  config.max_n = unsigned_field(doc, "max_n", config.max_n);
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("output must be a string");
    config.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("bundle")) {
    if (!doc.at("bundle").is_string()) throw ConfigError("bundle must be a string");
    config.bundle = doc.at("bundle").get<std::string>();
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

FiniteMeasure build_measure(const ExperimentConfig& config) {
  if (config.measure.empty()) throw ConfigError("\"measure\" is missing or empty");
  FiniteMeasure mu(config.group, config.mode);
  for (const auto& [element, weight] : config.measure) {
    const GroupElement g = element_at(config, element);
    const Scalar w = scalar_at(config, weight, config.mode);
    if (w.sign() < 0) fail_at(config.source, weight, 1, "negative weight");
    mu.add(g, w);
  }
  if (!mu.is_probability()) {
    throw ConfigError("measure weights sum to " + mu.mass().to_string() +
                      ", not 1");
  }
  return mu;
}

Experiment build_experiment(const ExperimentConfig& config) {
  FiniteMeasure mu = build_measure(config);
  const Scalar epsilon =
      config.epsilon ? scalar_at(config, *config.epsilon, config.mode)
                     : default_epsilon(config.mode);
  if (epsilon.sign() <= 0) throw ConfigError("epsilon must be positive");
  if (config.rule.is_null()) throw ConfigError("\"rule\" is missing");

  const json& rule = config.rule;
  const std::string type =
      rule.is_object() ? rule.value("type", std::string()) : std::string();
  if (type == "aux_convex") {
    if (!rule.contains("points") || !rule.at("points").is_object() ||
        rule.at("points").empty()) {
      throw ConfigError("aux_convex rule needs a \"points\" object");
    }
    std::vector<Scalar> points;
    std::vector<Scalar> weights;
    for (const auto& [value, weight] : rule.at("points").items()) {
      points.push_back(scalar_at(config, value, Arithmetic::kExact));
      weights.push_back(scalar_at(config, literal_text(weight), config.mode));
    }
    try {
      AuxSpace aux = AuxSpace::discrete(points, weights);
      StoppingRule r = aux_first_coordinate_rule(aux);
      return {std::move(mu), std::move(r), std::move(aux), epsilon, false};
    } catch (const Error& e) {
      throw ConfigError(std::string("aux_convex: ") + e.what());
    }
  }
  if (type == "beta_flag") {
    if (!rule.contains("fraction") || !rule.at("fraction").is_object()) {
      throw ConfigError("beta_flag rule needs a \"fraction\" object");
    }
    std::map<GroupElement, Scalar> fraction;
    for (const auto& [element, f] : rule.at("fraction").items()) {
      fraction[element_at(config, element)] =
          scalar_at(config, literal_text(f), config.mode);
    }
    const bool coupled = rule.value("coupled", false);
    try {
      // Built by hand: fraction 1 everywhere (T = 1) is a valid choice here.
      SplitPair split{FiniteMeasure(mu.group(), mu.arithmetic()),
                      FiniteMeasure(mu.group(), mu.arithmetic())};
      const Scalar one = Scalar::one(mu.arithmetic());
      for (const auto& [g, f] : fraction) {
        if (!mu.contains(g)) {
          throw InvalidArgument("fraction given for " + format_element(g) +
                                ", which is outside supp(mu)");
        }
        if (f.sign() < 0 || f > one) {
          throw InvalidArgument("fraction outside [0, 1]");
        }
      }
      for (const auto& [g, w] : mu) {
        const auto it = fraction.find(g);
        const Scalar f = it == fraction.end() ? Scalar::zero(mu.arithmetic())
                                              : it->second;
        split.beta.add(g, f * w);
        split.alpha.add(g, (one - f) * w);
      }
      AuxSpace aux = AuxSpace::unit_interval(mu, split);
      StoppingRule r = beta_flag_rule(aux);
      return {std::move(mu), std::move(r), std::move(aux), epsilon, coupled};
    } catch (const Error& e) {
      throw ConfigError(std::string("beta_flag: ") + e.what());
    }
  }
  return {std::move(mu), plain_rule(config, rule), std::nullopt, epsilon, false};
}

}  // namespace boundary_walk::cli
