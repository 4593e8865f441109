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

// Markov stopping rules on path prefixes and the transformed measure mu_T,
// the law of the stopped position x_T.
//
// A rule is a deterministic automaton fed one step at a time. It only ever
// sees the steps taken so far, which makes every rule prefix-measurable by
// construction. Its state doubles as the "decision state" used by the exact
// engine to merge prefixes: two prefixes ending at the same position in the
// same rule state have identical futures, so their weights can be summed.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "boundary_walk/group.hpp"
#include "boundary_walk/measure.hpp"
#include "boundary_walk/path.hpp"
#include "boundary_walk/rng.hpp"

namespace boundary_walk {

inline constexpr std::size_t kDefaultMaxHorizon = 10000;

// 2^-20 in exact mode, 1e-6 in float mode.
Scalar default_epsilon(Arithmetic mode);

// One step of a (possibly extended) walk. `aux` is the auxiliary token read
// by rules on G x X; plain walks leave it at zero.
struct Step {
  GroupElement increment;
  std::int64_t aux = 0;
};

// Opaque rule state. Ordered so the exact engine can key on it.
struct RuleState {
  std::vector<std::int64_t> tags;
  std::vector<GroupElement> elements;
  std::vector<RuleState> children;

  friend std::strong_ordering operator<=>(const RuleState& a,
                                          const RuleState& b);
  friend bool operator==(const RuleState& a, const RuleState& b);
};

enum class Verdict { kContinue, kStop };

struct Transition {
  RuleState state;
  Verdict verdict;
};

// Behaviour behind a StoppingRule.
class RuleLogic {
 public:
  virtual ~RuleLogic() = default;

  virtual RuleState initial(const GroupSpec& group) const = 0;
  virtual Transition advance(const RuleState& state, const Step& step) const = 0;
  // False when the state grows with the path, so merging never happens and
  // exact exploration degenerates to the full prefix tree.
  virtual bool has_decision_state() const { return true; }
  virtual std::string describe() const = 0;
};

// A Markov time T >= 1. Value type; copies share the immutable logic.
class StoppingRule {
 public:
  explicit StoppingRule(std::shared_ptr<const RuleLogic> logic,
                        std::optional<std::size_t> horizon_bound = {},
                        std::optional<double> tail_bound = {});

  RuleState initial_state(const GroupSpec& group) const {
    return logic_->initial(group);
  }
  Transition advance(const RuleState& state, const Step& step) const {
    return logic_->advance(state, step);
  }

  // T on the prefix, or nullopt if the rule has not fired within it.
  std::optional<std::size_t> stop_time(const PathPrefix& path) const;
  std::optional<std::size_t> stop_time(const std::vector<Step>& steps,
                                       const GroupSpec& group) const;
  // kStop iff T <= path.length().
  Verdict verdict(const PathPrefix& path) const;

  bool has_decision_state() const { return logic_->has_decision_state(); }
  // Rules known to stop by a fixed time.
  std::optional<std::size_t> horizon_bound() const { return horizon_bound_; }
  // rho < 1 with P(T > n) <= C rho^n, when known.
  std::optional<double> tail_bound() const { return tail_bound_; }
  StoppingRule with_tail_bound(double rho) const;

  std::string describe() const { return logic_->describe(); }
  const RuleLogic& logic() const { return *logic_; }

 private:
  std::shared_ptr<const RuleLogic> logic_;
  std::optional<std::size_t> horizon_bound_;
  std::optional<double> tail_bound_;
};

// T = n. Throws InvalidArgument for n < 1.
StoppingRule constant_rule(std::size_t n);
// First n >= 1 with x_n in A.
StoppingRule first_visit_rule(std::set<GroupElement> a);
// First n >= 1 with h_n in B.
StoppingRule first_increment_rule(std::set<GroupElement> b);
// T_1(x) + T_2(U^{T_1(x)} x): run `first` to completion, then `second` on
// the increment-shifted remainder.
StoppingRule sequential_compose(StoppingRule first, StoppingRule second);
// Generic rule from a prefix predicate: T is the first n for which
// `fires(prefix of length n)` holds. Has no decision state.
StoppingRule rule_from_predicate(
    std::string name, std::function<bool(const PathPrefix&)> fires);

// Successive stop indices T_1 < T_2 < ... with
// T_{i+1} = T_i + T(U^{T_i} x), as far as the path allows.
std::vector<std::size_t> iterate_stops(const StoppingRule& rule,
                                       const PathPrefix& path);

// Joint law of one step: a finite list of (step, probability).
class StepLaw {
 public:
  StepLaw(GroupSpec group, Arithmetic mode,
          std::vector<std::pair<Step, Scalar>> steps);

  // Steps (h, 0) with probability mu(h).
  static StepLaw plain(const FiniteMeasure& mu);

  const GroupSpec& group() const { return group_; }
  Arithmetic arithmetic() const { return mode_; }
  const std::vector<std::pair<Step, Scalar>>& steps() const { return steps_; }
  // Law of the increment alone.
  FiniteMeasure increment_law() const;

 private:
  GroupSpec group_;
  Arithmetic mode_;
  std::vector<std::pair<Step, Scalar>> steps_;
};

struct TransformResult {
  // Exact or empirical mu_T (never renormalized).
  FiniteMeasure measure;
  // Probability of not stopping within the explored horizon.
  Scalar mass_deficit;
  // E[T | T <= horizon].
  double mean_stopping_time = 0;
  std::size_t horizon = 0;
  // Exact engine: deficit still above epsilon at max_horizon.
  bool truncated = false;
  std::vector<std::string> warnings;
};

// Breadth-first exploration of the prefix tree with per-level merging of
// prefixes that share (position, rule state). Stops when the unstopped mass
// is at most epsilon or max_horizon levels have been explored.
TransformResult exact_transform(const StepLaw& law, const StoppingRule& rule,
                                const Scalar& epsilon,
                                std::size_t max_horizon = kDefaultMaxHorizon);
TransformResult exact_transform(const FiniteMeasure& mu,
                                const StoppingRule& rule, const Scalar& epsilon,
                                std::size_t max_horizon = kDefaultMaxHorizon);

// Source of random steps for Monte Carlo paths.
class StepSource {
 public:
  virtual ~StepSource() = default;
  virtual Step next(CounterRng& rng) const = 0;
};

class IncrementStepSource final : public StepSource {
 public:
  explicit IncrementStepSource(const FiniteMeasure& mu) : sampler_(mu) {}
  Step next(CounterRng& rng) const override { return {sampler_.draw(rng), 0}; }

 private:
  IncrementSampler sampler_;
};

struct MonteCarloOptions {
  std::size_t samples = 100000;
  std::size_t horizon_cap = kDefaultMaxHorizon;
  SeededStream stream;
  unsigned workers = 1;
};

// Stopped positions of the Monte Carlo paths, with counts.
struct StoppedCounts {
  std::map<GroupElement, std::uint64_t> counts;
  std::uint64_t stopped = 0;
  std::uint64_t samples = 0;
  std::uint64_t total_stopping_time = 0;
};

// Sample i uses stream.substream(i), so the counts do not depend on how the
// samples are spread over workers.
StoppedCounts sample_stopped_positions(const GroupSpec& group,
                                       const StepSource& source,
                                       const StoppingRule& rule,
                                       const MonteCarloOptions& options);

// Empirical mu_T: count / samples in the requested arithmetic mode.
TransformResult monte_carlo_transform(const GroupSpec& group, Arithmetic mode,
                                      const StepSource& source,
                                      const StoppingRule& rule,
                                      const MonteCarloOptions& options);
TransformResult monte_carlo_transform(const FiniteMeasure& mu,
                                      const StoppingRule& rule,
                                      const MonteCarloOptions& options);

}  // namespace boundary_walk
