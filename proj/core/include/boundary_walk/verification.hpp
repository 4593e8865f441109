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

// Executable checks around bounded harmonic functions: harmonicity
// residuals, optional stopping (E f(x_T) = f(e)), and transfer of
// harmonicity from mu to mu_T.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boundary_walk/measure.hpp"
#include "boundary_walk/rng.hpp"
#include "boundary_walk/stopping.hpp"

namespace boundary_walk {

// Absolute tolerance for checks on exactly known functions.
inline constexpr double kExactCheckTolerance = 1e-9;

struct HarmonicValue {
  double value = 0;
  // Zero for exactly known values.
  double std_error = 0;
  // False when the estimate could not stabilize (e.g. ray too short).
  bool stable = true;
};

// A bounded function on G that is claimed harmonic on some region. Values
// are either exact or Monte Carlo estimates with standard errors.
class HarmonicFunction {
 public:
  using Evaluator = std::function<HarmonicValue(const GroupElement&)>;
  using Region = std::function<bool(const GroupElement&)>;

  HarmonicFunction(std::string description, double bound_norm,
                   Evaluator evaluate, Region faithful = {});

  HarmonicValue operator()(const GroupElement& g) const { return evaluate_(g); }
  double value(const GroupElement& g) const { return evaluate_(g).value; }

  double bound_norm() const { return bound_norm_; }
  const std::string& description() const { return description_; }
  bool estimated() const { return estimated_; }
  void set_estimated(bool estimated) { estimated_ = estimated; }

  // True where the function agrees with the unclipped harmonic function it
  // stands for. Harmonicity at g is only asserted when g h is faithful for
  // every h in the support of the measure.
  bool faithful(const GroupElement& g) const {
    return !faithful_ || faithful_(g);
  }

 private:
  std::string description_;
  double bound_norm_;
  Evaluator evaluate_;
  Region faithful_;
  bool estimated_ = false;
};

// f = c everywhere.
HarmonicFunction constant_harmonic(double c);

// f(n) = r^clamp(n, lower, upper) on Z. With r = q/p it is harmonic for
// p delta_1 + q delta_-1 away from the clipping points. Exact in doubles
// when r is a power of two.
HarmonicFunction clipped_exponential_harmonic(double r, std::int64_t lower,
                                              std::int64_t upper);

// f(g) = probability that simple random walk on F_k started at g converges
// to a boundary ray whose reduced word begins with `prefix`. Estimated from
// `ray_samples` rays of `ray_length` steps each; every element gets its own
// deterministic substream, and values are cached. Requires k >= 2 and a
// nonempty reduced prefix.
HarmonicFunction cylinder_harmonic(const GroupSpec& group,
                                   const std::vector<int>& prefix,
                                   std::size_t ray_samples,
                                   std::size_t ray_length,
                                   SeededStream stream);

enum class CheckStatus { kPass, kFail, kInconclusive };

std::string_view to_string(CheckStatus status);

struct CheckReport {
  std::string name;
  std::size_t points = 0;
  double residual = 0;
  double tolerance = 0;
  CheckStatus status = CheckStatus::kPass;
  std::vector<std::uint64_t> seeds;
  std::string detail;

  bool passed() const { return status == CheckStatus::kPass; }
};

// max_g |f(g) - sum_h f(gh) mu(h)| over the faithful points. Tolerance is
// kExactCheckTolerance for exact f, 4 combined standard errors otherwise.
CheckReport harmonicity_residual(const HarmonicFunction& f,
                                 const FiniteMeasure& mu,
                                 const std::vector<GroupElement>& points);

// Monte Carlo E f(x_T) against f(e). Passes within 4 standard errors plus
// deficit * bound_norm; inconclusive when more than 1e-3 of the paths did
// not stop or fewer than 100 samples were drawn.
CheckReport doob_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                       const StoppingRule& rule, std::size_t samples,
                       SeededStream stream, unsigned workers = 1,
                       std::size_t horizon_cap = kDefaultMaxHorizon);

// Harmonicity for mu and for mu_T at the given points: the residual is the
// larger of the two maxima, and the tolerance allows deficit * bound_norm
// on top of the exact or statistical tolerance.
CheckReport transfer_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                           const TransformResult& transformed,
                           const std::vector<GroupElement>& points);
CheckReport transfer_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                           const StoppingRule& rule,
                           const std::vector<GroupElement>& points,
                           const Scalar& epsilon,
                           std::size_t max_horizon = kDefaultMaxHorizon);

// (n, H(mu^{*n})) for n = 1..max_n. Throws InvalidArgument once a power has
// more than support_cap atoms.
std::vector<std::pair<std::size_t, double>> entropy_diagnostic(
    const FiniteMeasure& mu, std::size_t max_n,
    std::size_t support_cap = std::size_t{1} << 20);

struct BundleOptions {
  std::size_t samples = 100000;
  std::size_t ray_samples = 20000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// Named check bundles: "identities", "doob", "transfer", or "all".
// Throws InvalidArgument for other names.
std::vector<CheckReport> run_bundle(const std::string& name,
                                    const BundleOptions& options);
bool is_bundle(const std::string& name);

}  // namespace boundary_walk
