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

#include "boundary_walk/extended.hpp"

#include <algorithm>
#include <memory>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

namespace {

bool near_one(const Scalar& s) {
  if (s.is_exact()) return s == Scalar::one(Arithmetic::kExact);
  return std::abs(s.to_double() - 1.0) <= kProbabilityTolerance;
}

bool same_scalars(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].mode() != b[i].mode() || a[i] != b[i]) return false;
  }
  return true;
}

// Rules that read aux tokens remember the space they were built for.
class AuxRuleLogic : public RuleLogic {
 public:
  explicit AuxRuleLogic(AuxSpace aux) : aux_(std::move(aux)) {}
  const AuxSpace& aux() const { return aux_; }

 private:
  AuxSpace aux_;
};

// tags = {steps taken, target}; the target is read from the first draw.
class FirstCoordinateLogic final : public AuxRuleLogic {
 public:
  FirstCoordinateLogic(AuxSpace aux, std::vector<std::int64_t> values)
      : AuxRuleLogic(std::move(aux)), values_(std::move(values)) {}

  RuleState initial(const GroupSpec&) const override { return {{0, 0}, {}, {}}; }

  Transition advance(const RuleState& state, const Step& step) const override {
    std::int64_t target = state.tags[1];
    if (state.tags[0] == 0) {
      if (step.aux < 0 || static_cast<std::size_t>(step.aux) >= values_.size()) {
        throw InvalidArgument("aux token outside the discrete space");
      }
      target = values_[static_cast<std::size_t>(step.aux)];
    }
    const std::int64_t steps = state.tags[0] + 1;
    return {{{steps, target}, {}, {}},
            steps >= target ? Verdict::kStop : Verdict::kContinue};
  }

  std::string describe() const override { return "aux_first_coordinate"; }

 private:
  std::vector<std::int64_t> values_;
};

class BetaFlagLogic final : public AuxRuleLogic {
 public:
  using AuxRuleLogic::AuxRuleLogic;

  RuleState initial(const GroupSpec&) const override { return {}; }

  Transition advance(const RuleState&, const Step& step) const override {
    return {{}, step.aux == 1 ? Verdict::kStop : Verdict::kContinue};
  }

  std::string describe() const override { return "beta_flag"; }
};

}  // namespace

AuxSpace AuxSpace::discrete(std::vector<Scalar> points,
                            std::vector<Scalar> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw InvalidArgument("discrete aux space needs one weight per point");
  }
  const Arithmetic mode = weights.front().mode();
  Scalar total = Scalar::zero(mode);
  for (const auto& w : weights) {
    if (w.mode() != mode) throw ArithmeticMismatch("aux weights mix modes");
    if (w.sign() < 0) throw InvalidArgument("negative aux weight");
    total += w;
  }
  if (!near_one(total)) throw InvalidArgument("aux weights must sum to 1");
  return AuxSpace(DiscreteAux{std::move(points), std::move(weights)}, mode);
}

AuxSpace AuxSpace::unit_interval(const FiniteMeasure& mu,
                                 const SplitPair& split) {
  const Arithmetic mode = mu.arithmetic();
  if (!mu.is_probability()) {
    throw InvalidArgument("interval partition needs a probability measure");
  }
  if (split.alpha.group() != mu.group() || split.beta.group() != mu.group()) {
    throw GroupMismatch("split lives on another group");
  }
  UnitIntervalAux space;
  Scalar lower = Scalar::zero(mode);
  for (const auto& [g, w] : mu) {
    Scalar a = split.alpha.weight(g).in_mode(mode);
    Scalar b = split.beta.weight(g).in_mode(mode);
    const Scalar gap = (a + b - w).abs();
    const bool ok = mode == Arithmetic::kExact
                        ? gap.is_zero()
                        : gap.to_double() <= kProbabilityTolerance;
    if (!ok) throw InvalidArgument("split parts do not add up to mu");
    space.cells.push_back({g, lower, a, b});
    lower += w;
  }
  for (const auto* part : {&split.alpha, &split.beta}) {
    for (const auto& [g, w] : *part) {
      if (!mu.contains(g)) {
        throw InvalidArgument("split part charges a point outside supp(mu)");
      }
    }
  }
  return AuxSpace(std::move(space), mode);
}

bool AuxSpace::partitions(const FiniteMeasure& mu) const {
  if (is_discrete() || mu.arithmetic() != mode_) return false;
  const auto& cells = as_interval().cells;
  if (cells.size() != mu.support_size()) return false;
  std::size_t i = 0;
  for (const auto& [g, w] : mu) {
    const auto& cell = cells[i++];
    if (cell.element != g) return false;
    const Scalar gap = (cell.alpha + cell.beta - w).abs();
    if (mode_ == Arithmetic::kExact ? !gap.is_zero()
                                    : gap.to_double() > kProbabilityTolerance) {
      return false;
    }
  }
  return true;
}

bool operator==(const AuxSpace& a, const AuxSpace& b) {
  if (a.mode_ != b.mode_ || a.is_discrete() != b.is_discrete()) return false;
  if (a.is_discrete()) {
    return same_scalars(a.as_discrete().points, b.as_discrete().points) &&
           same_scalars(a.as_discrete().weights, b.as_discrete().weights);
  }
  const auto& x = a.as_interval().cells;
  const auto& y = b.as_interval().cells;
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].element != y[i].element || x[i].alpha != y[i].alpha ||
        x[i].beta != y[i].beta) {
      return false;
    }
  }
  return true;
}

PathPrefix ExtendedPrefix::projection() const {
  PathPrefix path(identity(group_));
  for (const auto& s : steps_) path.push_back(s.increment);
  return path;
}

std::vector<Step> ExtendedPrefix::rule_steps() const {
  std::vector<Step> out;
  out.reserve(steps_.size());
  for (const auto& s : steps_) out.push_back({s.increment, s.gamma.token});
  return out;
}

ExtendedStepSource::ExtendedStepSource(const FiniteMeasure& mu,
                                       const AuxSpace& aux, bool coupled)
    : sampler_(mu), discrete_(aux.is_discrete()), coupled_(coupled) {
  if (discrete_) {
    if (coupled_) {
      throw InvalidArgument("coupled sampling needs an interval aux space");
    }
    Scalar running = Scalar::zero(aux.arithmetic());
    for (const auto& w : aux.as_discrete().weights) {
      running += w;
      aux_cumulative_.push_back(running.to_double());
    }
    aux_cumulative_.back() = 1.0;
    return;
  }
  if (!aux.partitions(mu)) {
    throw InvalidArgument("aux space is not a partition built from mu");
  }
  for (const auto& cell : aux.as_interval().cells) {
    cell_elements_.push_back(cell.element);
    const Scalar upper = cell.lower + cell.alpha + cell.beta;
    cell_lower_.push_back(cell.lower.to_double());
    cell_split_.push_back((cell.lower + cell.alpha).to_double());
    cell_upper_.push_back(upper.to_double());
    beta_ratio_.push_back(
        (cell.alpha / (cell.alpha + cell.beta)).to_double());
  }
  cell_upper_.back() = 1.0;
}

ExtendedStep ExtendedStepSource::next_extended(CounterRng& rng) const {
  if (coupled_) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cell_upper_.begin(), cell_upper_.end(), u);
    const std::size_t i =
        std::min(static_cast<std::size_t>(it - cell_upper_.begin()),
                 cell_upper_.size() - 1);
    return {cell_elements_[i], {u >= cell_split_[i] ? 1 : 0, u}};
  }
  const std::size_t i = sampler_.draw_index(rng);
  const GroupElement& h = sampler_.support()[i];
  const double u = rng.uniform();
  if (discrete_) {
    const auto it =
        std::upper_bound(aux_cumulative_.begin(), aux_cumulative_.end(), u);
    const auto j = std::min(static_cast<std::size_t>(it - aux_cumulative_.begin()),
                            aux_cumulative_.size() - 1);
    return {h, {static_cast<std::int64_t>(j), u}};
  }
  return {h, {u >= beta_ratio_[i] ? 1 : 0, u}};
}

Step ExtendedStepSource::next(CounterRng& rng) const {
  ExtendedStep s = next_extended(rng);
  return {std::move(s.increment), s.gamma.token};
}

ExtendedPrefix sample_extended(const FiniteMeasure& mu, const AuxSpace& aux,
                               std::size_t length, SeededStream stream,
                               bool coupled) {
  const ExtendedStepSource source(mu, aux, coupled);
  CounterRng rng(stream);
  ExtendedPrefix prefix(mu.group());
  for (std::size_t i = 0; i < length; ++i) {
    prefix.push_back(source.next_extended(rng));
  }
  return prefix;
}

StepLaw extended_step_law(const FiniteMeasure& mu, const AuxSpace& aux) {
  const Arithmetic mode = mu.arithmetic();
  if (aux.arithmetic() != mode) {
    throw ArithmeticMismatch("aux space and measure use different modes");
  }
  std::vector<std::pair<Step, Scalar>> steps;
  if (aux.is_discrete()) {
    const auto& weights = aux.as_discrete().weights;
    for (const auto& [g, w] : mu) {
      for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].is_zero()) continue;
        steps.push_back({Step{g, static_cast<std::int64_t>(i)}, w * weights[i]});
      }
    }
  } else {
    if (!aux.partitions(mu)) {
      throw InvalidArgument("aux space is not a partition built from mu");
    }
    for (const auto& cell : aux.as_interval().cells) {
      if (!cell.alpha.is_zero()) steps.push_back({Step{cell.element, 0}, cell.alpha});
      if (!cell.beta.is_zero()) steps.push_back({Step{cell.element, 1}, cell.beta});
    }
  }
  return StepLaw(mu.group(), mode, std::move(steps));
}

StoppingRule aux_first_coordinate_rule(const AuxSpace& aux) {
  if (!aux.is_discrete()) {
    throw InvalidArgument("first-coordinate rule needs a discrete aux space");
  }
  std::vector<std::int64_t> values;
  std::int64_t largest = 0;
  for (const auto& b : aux.as_discrete().points) {
    const Scalar exact = b.in_mode(Arithmetic::kExact);
    if (exact.rational().get_den() != 1 || exact.sign() <= 0 ||
        !exact.rational().get_num().fits_slong_p()) {
      throw InvalidArgument("aux point " + b.to_string() +
                            " is not a positive integer");
    }
    values.push_back(exact.rational().get_num().get_si());
    largest = std::max(largest, values.back());
  }
  return StoppingRule(
      std::make_shared<FirstCoordinateLogic>(aux, std::move(values)),
      static_cast<std::size_t>(largest));
}

StoppingRule beta_flag_rule(const AuxSpace& aux) {
  if (aux.is_discrete()) {
    throw InvalidArgument("beta-flag rule needs an interval aux space");
  }
  Scalar beta_mass = Scalar::zero(aux.arithmetic());
  for (const auto& cell : aux.as_interval().cells) beta_mass += cell.beta;
  if (beta_mass.is_zero()) {
    throw DegenerateSplit("beta part is empty; the rule would never stop");
  }
  // P(T > n) = |alpha|^n.
  const double rho = 1.0 - beta_mass.to_double();
  StoppingRule rule(std::make_shared<BetaFlagLogic>(aux));
  return rho < 1.0 ? rule.with_tail_bound(std::max(rho, 0.0)) : rule;
}

const AuxSpace* bound_aux(const StoppingRule& rule) {
  const auto* logic = dynamic_cast<const AuxRuleLogic*>(&rule.logic());
  return logic == nullptr ? nullptr : &logic->aux();
}

TransformResult project_transform(const FiniteMeasure& mu, const AuxSpace& aux,
                                  const StoppingRule& rule,
                                  const ProjectionOptions& options) {
  if (const AuxSpace* bound = bound_aux(rule); bound != nullptr) {
    if (!(*bound == aux)) {
      throw InvalidArgument("rule was built for a different aux space");
    }
  }
  if (!aux.is_discrete() && !aux.partitions(mu)) {
    throw InvalidArgument("aux space is not built from a split of mu");
  }
  if (options.engine == Engine::kExact) {
    return exact_transform(extended_step_law(mu, aux), rule, options.epsilon,
                           options.max_horizon);
  }
  const ExtendedStepSource source(mu, aux, options.coupled);
  return monte_carlo_transform(mu.group(), mu.arithmetic(), source, rule,
                               options.monte_carlo);
}

}  // namespace boundary_walk
