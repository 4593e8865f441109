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

#include "boundary_walk/stopping.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "boundary_walk/error.hpp"
#include "boundary_walk/text.hpp"

namespace boundary_walk {

namespace {

std::string describe_set(const std::set<GroupElement>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& g : s) {
    if (!first) out += ", ";
    out += format_element(g);
    first = false;
  }
  return out + "}";
}

class ConstantLogic final : public RuleLogic {
 public:
  explicit ConstantLogic(std::size_t n) : n_(n) {}

  RuleState initial(const GroupSpec&) const override { return {{0}, {}, {}}; }

  Transition advance(const RuleState& state, const Step&) const override {
    const std::int64_t steps = state.tags[0] + 1;
    return {{{steps}, {}, {}},
            static_cast<std::size_t>(steps) >= n_ ? Verdict::kStop
                                                  : Verdict::kContinue};
  }

  std::string describe() const override {
    return "constant(" + std::to_string(n_) + ")";
  }

 private:
  std::size_t n_;
};

// Tracks its own position relative to where it was started, so it composes
// correctly after other rules.
class FirstVisitLogic final : public RuleLogic {
 public:
  explicit FirstVisitLogic(std::set<GroupElement> targets)
      : targets_(std::move(targets)) {}

  RuleState initial(const GroupSpec& group) const override {
    return {{}, {identity(group)}, {}};
  }

  Transition advance(const RuleState& state, const Step& step) const override {
    GroupElement x = state.elements[0] * step.increment;
    const bool hit = targets_.count(x) != 0;
    return {{{}, {std::move(x)}, {}}, hit ? Verdict::kStop : Verdict::kContinue};
  }

  std::string describe() const override {
    return "first_visit" + describe_set(targets_);
  }

 private:
  std::set<GroupElement> targets_;
};

class FirstIncrementLogic final : public RuleLogic {
 public:
  explicit FirstIncrementLogic(std::set<GroupElement> targets)
      : targets_(std::move(targets)) {}

  RuleState initial(const GroupSpec&) const override { return {}; }

  Transition advance(const RuleState&, const Step& step) const override {
    return {{}, targets_.count(step.increment) != 0 ? Verdict::kStop
                                                    : Verdict::kContinue};
  }

  std::string describe() const override {
    return "first_increment" + describe_set(targets_);
  }

 private:
  std::set<GroupElement> targets_;
};

// tags[0] is the phase; children[0] the state of the active sub-rule.
class SequentialLogic final : public RuleLogic {
 public:
  SequentialLogic(StoppingRule first, StoppingRule second)
      : first_(std::move(first)), second_(std::move(second)) {}

  RuleState initial(const GroupSpec& group) const override {
    return {{0, 0}, {}, {first_.initial_state(group)}};
  }

  Transition advance(const RuleState& state, const Step& step) const override {
    const bool in_second = state.tags[0] == 1;
    const StoppingRule& active = in_second ? second_ : first_;
    Transition sub = active.advance(state.children[0], step);
    if (sub.verdict == Verdict::kContinue) {
      return {{state.tags, {}, {std::move(sub.state)}}, Verdict::kContinue};
    }
    if (in_second) return {{state.tags, {}, {}}, Verdict::kStop};
    // The second rule starts afresh on the shifted path U^{T_1} x.
    const GroupSpec& group = step.increment.group();
    return {{{1, 0}, {}, {second_.initial_state(group)}}, Verdict::kContinue};
  }

  bool has_decision_state() const override {
    return first_.has_decision_state() && second_.has_decision_state();
  }

  std::string describe() const override {
    return "sequential(" + first_.describe() + ", " + second_.describe() + ")";
  }

 private:
  StoppingRule first_;
  StoppingRule second_;
};

// The state carries the whole increment history.
class PredicateLogic final : public RuleLogic {
 public:
  PredicateLogic(std::string name,
                 std::function<bool(const PathPrefix&)> fires)
      : name_(std::move(name)), fires_(std::move(fires)) {}

  RuleState initial(const GroupSpec& group) const override {
    return {{}, {identity(group)}, {}};
  }

  Transition advance(const RuleState& state, const Step& step) const override {
    RuleState next = state;
    next.elements.push_back(step.increment);
    const PathPrefix prefix(
        next.elements.front(),
        std::vector<GroupElement>(next.elements.begin() + 1,
                                  next.elements.end()));
    return {std::move(next), fires_(prefix) ? Verdict::kStop : Verdict::kContinue};
  }

  bool has_decision_state() const override { return false; }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<bool(const PathPrefix&)> fires_;
};

Scalar sum_weights(const std::map<std::pair<GroupElement, RuleState>, Scalar>&
                       frontier,
                   Arithmetic mode) {
  Scalar total = Scalar::zero(mode);
  for (const auto& [key, w] : frontier) total += w;
  return total;
}

void count_range(const GroupSpec& group, const StepSource& source,
                 const StoppingRule& rule, const MonteCarloOptions& options,
                 std::uint64_t begin, std::uint64_t end, StoppedCounts& out) {
  const RuleState start = rule.initial_state(group);
  const GroupElement e = identity(group);
  for (std::uint64_t i = begin; i < end; ++i) {
    CounterRng rng(options.stream.substream(i));
    RuleState state = start;
    GroupElement x = e;
    for (std::size_t n = 1; n <= options.horizon_cap; ++n) {
      const Step step = source.next(rng);
      x = x * step.increment;
      Transition t = rule.advance(state, step);
      if (t.verdict == Verdict::kStop) {
        ++out.counts[x];
        ++out.stopped;
        out.total_stopping_time += n;
        break;
      }
      state = std::move(t.state);
    }
  }
  out.samples += end - begin;
}

}  // namespace

Scalar default_epsilon(Arithmetic mode) {
  return mode == Arithmetic::kExact ? Scalar::power_of_two(mode, -20)
                                    : Scalar(1e-6);
}

std::strong_ordering operator<=>(const RuleState& a, const RuleState& b) {
  if (auto c = a.tags <=> b.tags; c != 0) return c;
  if (auto c = a.elements <=> b.elements; c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.children.begin(), a.children.end(), b.children.begin(),
      b.children.end());
}

bool operator==(const RuleState& a, const RuleState& b) {
  return a.tags == b.tags && a.elements == b.elements &&
         a.children == b.children;
}

StoppingRule::StoppingRule(std::shared_ptr<const RuleLogic> logic,
                           std::optional<std::size_t> horizon_bound,
                           std::optional<double> tail_bound)
    : logic_(std::move(logic)),
      horizon_bound_(horizon_bound),
      tail_bound_(tail_bound) {
  if (!logic_) throw InvalidArgument("stopping rule without logic");
}

std::optional<std::size_t> StoppingRule::stop_time(
    const PathPrefix& path) const {
  RuleState state = initial_state(path.origin().group());
  for (std::size_t n = 0; n < path.length(); ++n) {
    Transition t = advance(state, {path.increments()[n], 0});
    if (t.verdict == Verdict::kStop) return n + 1;
    state = std::move(t.state);
  }
  return std::nullopt;
}

std::optional<std::size_t> StoppingRule::stop_time(
    const std::vector<Step>& steps, const GroupSpec& group) const {
  RuleState state = initial_state(group);
  for (std::size_t n = 0; n < steps.size(); ++n) {
    Transition t = advance(state, steps[n]);
    if (t.verdict == Verdict::kStop) return n + 1;
    state = std::move(t.state);
  }
  return std::nullopt;
}

Verdict StoppingRule::verdict(const PathPrefix& path) const {
  return stop_time(path) ? Verdict::kStop : Verdict::kContinue;
}

StoppingRule StoppingRule::with_tail_bound(double rho) const {
  if (!(rho >= 0 && rho < 1)) throw InvalidArgument("tail ratio must be in [0,1)");
  return StoppingRule(logic_, horizon_bound_, rho);
}

StoppingRule constant_rule(std::size_t n) {
  if (n < 1) throw InvalidArgument("constant stopping time must be >= 1");
  return StoppingRule(std::make_shared<ConstantLogic>(n), n);
}

StoppingRule first_visit_rule(std::set<GroupElement> a) {
  if (a.empty()) throw InvalidArgument("first-visit set must be nonempty");
  return StoppingRule(std::make_shared<FirstVisitLogic>(std::move(a)));
}

StoppingRule first_increment_rule(std::set<GroupElement> b) {
  if (b.empty()) throw InvalidArgument("first-increment set must be nonempty");
  return StoppingRule(std::make_shared<FirstIncrementLogic>(std::move(b)));
}

StoppingRule sequential_compose(StoppingRule first, StoppingRule second) {
  std::optional<std::size_t> bound;
  if (first.horizon_bound() && second.horizon_bound()) {
    bound = *first.horizon_bound() + *second.horizon_bound();
  }
  std::optional<double> tail;
  if (first.tail_bound() && second.tail_bound()) {
    tail = std::max(*first.tail_bound(), *second.tail_bound());
  }
  return StoppingRule(
      std::make_shared<SequentialLogic>(std::move(first), std::move(second)),
      bound, tail);
}

StoppingRule rule_from_predicate(
    std::string name, std::function<bool(const PathPrefix&)> fires) {
  return StoppingRule(
      std::make_shared<PredicateLogic>(std::move(name), std::move(fires)));
}

std::vector<std::size_t> iterate_stops(const StoppingRule& rule,
                                       const PathPrefix& path) {
  std::vector<std::size_t> stops;
  const GroupSpec& group = path.origin().group();
  // Resetting the automaton at T_i runs T on U^{T_i} x.
  RuleState state = rule.initial_state(group);
  for (std::size_t n = 0; n < path.length(); ++n) {
    Transition t = rule.advance(state, {path.increments()[n], 0});
    if (t.verdict == Verdict::kStop) {
      stops.push_back(n + 1);
      state = rule.initial_state(group);
    } else {
      state = std::move(t.state);
    }
  }
  return stops;
}

StepLaw::StepLaw(GroupSpec group, Arithmetic mode,
                 std::vector<std::pair<Step, Scalar>> steps)
    : group_(group), mode_(mode), steps_(std::move(steps)) {
  for (const auto& [step, p] : steps_) {
    if (step.increment.group() != group_) {
      throw GroupMismatch("step law increment from another group");
    }
    if (p.mode() != mode_) throw ArithmeticMismatch("step law weight mode");
  }
}

StepLaw StepLaw::plain(const FiniteMeasure& mu) {
  std::vector<std::pair<Step, Scalar>> steps;
  for (const auto& [g, w] : mu) steps.push_back({Step{g, 0}, w});
  return StepLaw(mu.group(), mu.arithmetic(), std::move(steps));
}

FiniteMeasure StepLaw::increment_law() const {
  FiniteMeasure out(group_, mode_);
  for (const auto& [step, p] : steps_) out.add(step.increment, p);
  return out;
}

TransformResult exact_transform(const StepLaw& law, const StoppingRule& rule,
                                const Scalar& epsilon,
                                std::size_t max_horizon) {
  const Arithmetic mode = law.arithmetic();
  const Scalar eps = epsilon.in_mode(mode);
  if (eps.sign() <= 0) throw InvalidArgument("epsilon must be positive");

  TransformResult result{FiniteMeasure(law.group(), mode),
                         Scalar::one(mode), 0.0, 0, false, {}};
  if (!rule.has_decision_state()) {
    result.warnings.push_back(
        "rule " + rule.describe() +
        " exposes no decision state; exploring the full prefix tree "
        "(exponential cost)");
  }

  std::map<std::pair<GroupElement, RuleState>, Scalar> frontier;
  frontier.emplace(std::make_pair(identity(law.group()),
                                  rule.initial_state(law.group())),
                   Scalar::one(mode));
  Scalar unstopped = Scalar::one(mode);
  double weighted_time = 0;
  std::size_t depth = 0;
  while (!frontier.empty() && unstopped > eps && depth < max_horizon) {
    ++depth;
    std::map<std::pair<GroupElement, RuleState>, Scalar> next;
    for (const auto& [key, w] : frontier) {
      const auto& [x, state] = key;
      for (const auto& [step, p] : law.steps()) {
        Transition t = rule.advance(state, step);
        GroupElement y = x * step.increment;
        Scalar wp = w * p;
        if (t.verdict == Verdict::kStop) {
          weighted_time += static_cast<double>(depth) * wp.to_double();
          result.measure.add(y, wp);
        } else {
          auto [it, inserted] = next.try_emplace(
              std::make_pair(std::move(y), std::move(t.state)), wp);
          if (!inserted) it->second += wp;
        }
      }
    }
    frontier = std::move(next);
    unstopped = sum_weights(frontier, mode);
  }

  result.mass_deficit = unstopped;
  result.horizon = depth;
  result.truncated = unstopped > eps;
  const double stopped = result.measure.mass().to_double();
  result.mean_stopping_time = stopped > 0 ? weighted_time / stopped : 0.0;
  if (result.truncated) {
    result.warnings.push_back(
        "unstopped mass " + unstopped.to_decimal() + " exceeds epsilon at horizon " +
        std::to_string(depth) + "; the rule may not stop almost surely");
  }
  return result;
}

TransformResult exact_transform(const FiniteMeasure& mu,
                                const StoppingRule& rule, const Scalar& epsilon,
                                std::size_t max_horizon) {
  if (!mu.is_probability()) {
    throw InvalidArgument("exact transform needs a probability measure");
  }
  return exact_transform(StepLaw::plain(mu), rule, epsilon, max_horizon);
}

StoppedCounts sample_stopped_positions(const GroupSpec& group,
                                       const StepSource& source,
                                       const StoppingRule& rule,
                                       const MonteCarloOptions& options) {
  if (options.samples < 1) throw InvalidArgument("need at least one sample");
  const std::uint64_t n = options.samples;
  const unsigned workers =
      std::max(1U, std::min<unsigned>(options.workers,
                                      static_cast<unsigned>(std::min<std::uint64_t>(n, 1024))));
  std::vector<StoppedCounts> parts(workers);
  if (workers == 1) {
    count_range(group, source, rule, options, 0, n, parts[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = n * w / workers;
      const std::uint64_t end = n * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        count_range(group, source, rule, options, begin, end, parts[w]);
      });
    }
    for (auto& t : threads) t.join();
  }
  StoppedCounts merged;
  for (auto& part : parts) {
    for (auto& [g, c] : part.counts) merged.counts[g] += c;
    merged.stopped += part.stopped;
    merged.samples += part.samples;
    merged.total_stopping_time += part.total_stopping_time;
  }
  return merged;
}

TransformResult monte_carlo_transform(const GroupSpec& group, Arithmetic mode,
                                      const StepSource& source,
                                      const StoppingRule& rule,
                                      const MonteCarloOptions& options) {
  const StoppedCounts counts =
      sample_stopped_positions(group, source, rule, options);
  const long samples = static_cast<long>(counts.samples);
  TransformResult result{FiniteMeasure(group, mode), Scalar::zero(mode), 0.0,
                         options.horizon_cap, false, {}};
  for (const auto& [g, c] : counts.counts) {
    result.measure.add(g, Scalar::ratio(mode, static_cast<long>(c), samples));
  }
  result.mass_deficit = Scalar::ratio(
      mode, static_cast<long>(counts.samples - counts.stopped), samples);
  result.mean_stopping_time =
      counts.stopped == 0 ? 0.0
                          : static_cast<double>(counts.total_stopping_time) /
                                static_cast<double>(counts.stopped);
  if (counts.stopped < counts.samples) {
    result.warnings.push_back(
        std::to_string(counts.samples - counts.stopped) +
        " sampled paths did not stop within the horizon cap");
  }
  return result;
}

TransformResult monte_carlo_transform(const FiniteMeasure& mu,
                                      const StoppingRule& rule,
                                      const MonteCarloOptions& options) {
  const IncrementStepSource source(mu);
  return monte_carlo_transform(mu.group(), mu.arithmetic(), source, rule,
                               options);
}

}  // namespace boundary_walk
