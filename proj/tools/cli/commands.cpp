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

#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>

#include <CLI11.hpp>

#include "boundary_walk/error.hpp"
#include "boundary_walk/extended.hpp"
#include "boundary_walk/text.hpp"
#include "boundary_walk/verification.hpp"
#include "config.hpp"
#include "tables.hpp"

namespace boundary_walk::cli {

namespace {

using nlohmann::json;

int guarded(const std::string& label, std::ostream& err,
            const std::function<int()>& body, int input_error = kExitBadInput) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << label;
    if (e.line() > 0) err << ':' << e.line() << ':' << e.column();
    err << ": error: " << e.what() << '\n';
    return input_error;
  } catch (const ParseError& e) {
    err << label << ": error: " << e.what() << " (column " << e.column()
        << ")\n";
    return input_error;
  } catch (const InvalidArgument& e) {
    err << label << ": error: " << e.what() << '\n';
    return input_error;
  } catch (const DegenerateSplit& e) {
    err << label << ": error: " << e.what() << '\n';
    return input_error;
  } catch (const GroupMismatch& e) {
    err << label << ": error: " << e.what() << '\n';
    return input_error;
  } catch (const ArithmeticMismatch& e) {
    err << label << ": error: " << e.what() << '\n';
    return input_error;
  } catch (const std::exception& e) {
    err << label << ": internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

ExperimentConfig config_with_overrides(const RunOptions& options,
                                       bool required) {
  ExperimentConfig config;
  if (options.config) {
    config = load_config(*options.config);
  } else if (required) {
    throw ConfigError("--config is required");
  }
  if (options.seed) config.seed = *options.seed;
  if (options.workers) config.workers = *options.workers;
  if (options.mode) {
    if (*options.mode == "exact") {
      config.mode = Arithmetic::kExact;
    } else if (*options.mode == "float") {
      config.mode = Arithmetic::kFloat;
    } else {
      throw ConfigError("--mode must be exact or float");
    }
  }
  if (config.workers == 0) config.workers = 1;
  return config;
}

std::filesystem::path output_dir(const RunOptions& options,
                                 const ExperimentConfig& config) {
  if (options.out) return *options.out;
  if (config.output) return *config.output;
  if (const char* env = std::getenv("BOUNDARY_WALK_OUT"); env && *env) {
    return env;
  }
  return ".";
}

std::string label_for(const RunOptions& options) {
  return options.config ? *options.config : std::string("boundary-walk");
}

}  // namespace

int cmd_transform(const RunOptions& options, std::ostream& out,
                  std::ostream& err) {
  ExperimentConfig config;
  std::optional<Experiment> experiment;
  const int rc = guarded(label_for(options), err, [&] {
    config = config_with_overrides(options, true);
    experiment = build_experiment(config);
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  return guarded(label_for(options), err, [&] {
    const Experiment& x = *experiment;
    const bool monte_carlo = config.engine == "montecarlo";
    MonteCarloOptions mc;
    mc.samples = config.samples;
    mc.horizon_cap = config.max_horizon;
    mc.stream = SeededStream{config.seed, 0};
    mc.workers = config.workers;

    TransformResult result = [&] {
      if (x.aux) {
        ProjectionOptions p;
        p.engine = monte_carlo ? Engine::kMonteCarlo : Engine::kExact;
        p.epsilon = x.epsilon;
        p.max_horizon = config.max_horizon;
        p.monte_carlo = mc;
        p.coupled = x.coupled;
        return project_transform(x.mu, *x.aux, x.rule, p);
      }
      if (monte_carlo) return monte_carlo_transform(x.mu, x.rule, mc);
      return exact_transform(x.mu, x.rule, x.epsilon, config.max_horizon);
    }();
    const bool truncated =
        result.truncated || result.mass_deficit > x.epsilon;

    json meta = {
        {"group", group_to_json(config.group)},
        {"mode", std::string(to_string(config.mode))},
        {"engine", config.engine},
        {"rule", x.rule.describe()},
        {"epsilon", x.epsilon.to_string()},
        {"mass_deficit", result.mass_deficit.to_string()},
        {"mass_deficit_decimal", result.mass_deficit.to_decimal()},
        {"mean_stopping_time", format_double(result.mean_stopping_time)},
        {"horizon", result.horizon},
        {"truncated", truncated},
        {"seed", config.seed},
        {"support_size", result.measure.support_size()},
        {"warnings", result.warnings},
    };
    if (monte_carlo) meta["samples"] = config.samples;
    if (x.aux && !x.aux->is_discrete()) meta["coupled"] = x.coupled;

    const auto dir = output_dir(options, config);
    const auto table = (dir / "mu_T.csv").string();
    write_file(table, measure_csv(result.measure));
    write_file(sidecar_path(table), meta.dump(2) + "\n");

    out << "wrote " << table << " (" << result.measure.support_size()
        << " atoms, mass deficit " << result.mass_deficit.to_decimal()
        << ", horizon " << result.horizon << ")\n";
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    if (truncated) {
      err << "error: unstopped mass " << result.mass_deficit.to_decimal()
          << " exceeds epsilon " << x.epsilon.to_decimal() << '\n';
      return kExitTruncated;
    }
    return kExitOk;
  });
}

int cmd_verify(const RunOptions& options, std::ostream& out,
               std::ostream& err) {
  return guarded(label_for(options), err, [&] {
    const ExperimentConfig config = config_with_overrides(options, false);
    const std::string bundle =
        options.bundle ? *options.bundle : config.bundle.value_or("");
    if (bundle.empty()) throw ConfigError("no bundle given (--bundle)");
    if (!is_bundle(bundle)) {
      throw ConfigError("unknown bundle \"" + bundle +
                        "\" (expected identities, doob, transfer or all)");
    }
    BundleOptions b;
    b.samples = config.samples;
    b.ray_samples = config.ray_samples;
    b.seed = config.seed;
    b.workers = config.workers;
    const auto reports = run_bundle(bundle, b);

    const auto path = (output_dir(options, config) / "report.json").string();
    write_file(path, report_json(reports).dump(2) + "\n");

    bool failed = false;
    bool inconclusive = false;
    for (const auto& r : reports) {
      out << '[' << to_string(r.status) << "] " << r.name
          << "  residual=" << format_double(r.residual)
          << "  tolerance=" << format_double(r.tolerance) << '\n';
      failed = failed || r.status == CheckStatus::kFail;
      inconclusive = inconclusive || r.status == CheckStatus::kInconclusive;
    }
    out << reports.size() << " checks, report in " << path << '\n';
    if (failed) return kExitCheckFailed;
    if (inconclusive) return kExitInconclusive;
    return kExitOk;
  });
}

int cmd_entropy(const RunOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(label_for(options), err, [&] {
    const ExperimentConfig config = config_with_overrides(options, true);
    const FiniteMeasure mu = build_measure(config);
    const auto rows = entropy_diagnostic(mu, config.max_n);
    std::string csv = "n,entropy\n";
    for (const auto& [n, h] : rows) {
      csv += std::to_string(n) + "," + format_double(h) + "\n";
    }
    const auto path = (output_dir(options, config) / "entropy.csv").string();
    write_file(path, csv);
    out << csv;
    return kExitOk;
  });
}

int cmd_compare(const std::string& a, const std::string& b,
                const std::string& tolerance, std::ostream& out,
                std::ostream& err) {
  return guarded(
      "compare", err,
      [&] {
        const MeasureFile x = read_measure_file(a);
        const MeasureFile y = read_measure_file(b);
        if (x.group != y.group) {
          throw ConfigError("group mismatch: " + x.group.name() + " vs " +
                            y.group.name());
        }
        const Arithmetic mode =
            x.mode == Arithmetic::kExact && y.mode == Arithmetic::kExact
                ? Arithmetic::kExact
                : Arithmetic::kFloat;
        const Scalar tv = total_variation(x.measure.in_mode(mode),
                                          y.measure.in_mode(mode));
        const Scalar tol = parse_scalar(mode, tolerance);
        out << "tv " << tv.to_string();
        if (mode == Arithmetic::kExact) out << " (" << tv.to_decimal() << ")";
        out << '\n';
        return tv <= tol ? kExitOk : kExitExceeds;
      },
      kExitBadInput);
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Random walks on groups under Markov stopping times",
               "boundary-walk"};
  app.require_subcommand(1);

  RunOptions options;
  auto add_common = [&options](CLI::App* sub) {
    sub->add_option("--config", options.config, "Experiment config (JSON)");
    sub->add_option("--seed", options.seed, "Seed (overrides config)");
    sub->add_option("--workers", options.workers, "Monte Carlo worker threads");
    sub->add_option("--out", options.out, "Output directory");
    sub->add_option("--mode", options.mode, "Arithmetic: exact or float");
  };

  auto* transform = app.add_subcommand("transform", "Compute mu_T");
  add_common(transform);
  auto* verify = app.add_subcommand("verify", "Run a verification bundle");
  add_common(verify);
  verify->add_option("--bundle", options.bundle,
                     "identities, doob, transfer or all");
  auto* entropy = app.add_subcommand("entropy", "Entropies of mu^{*n}");
  add_common(entropy);

  std::string table_a;
  std::string table_b;
  std::string tolerance = "0";
  auto* compare = app.add_subcommand("compare", "TV distance of two tables");
  compare->add_option("a", table_a, "First table (CSV)")->required();
  compare->add_option("b", table_b, "Second table (CSV)")->required();
  compare->add_option("--tolerance", tolerance, "Largest accepted TV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "boundary-walk: " << e.what() << '\n';
    return kExitBadInput;
  }

  if (*transform) return cmd_transform(options, out, err);
  if (*verify) return cmd_verify(options, out, err);
  if (*entropy) return cmd_entropy(options, out, err);
  return cmd_compare(table_a, table_b, tolerance, out, err);
}

}  // namespace boundary_walk::cli
