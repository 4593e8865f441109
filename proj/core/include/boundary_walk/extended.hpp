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

// The walk extended to G x X: every increment is paired with an auxiliary
// draw gamma from (X, m), and stopping rules may read those draws. Only the
// group coordinate is reported, so the result is again a measure on G.
//
// Two auxiliary spaces are supported:
//
//   Discrete       points b_1..b_N with weights a_1..a_N. A draw is reported
//                  as the index of its point.
//   UnitInterval   (0, 1) partitioned into cells I_g of length mu(g), one per
//                  support element in canonical order, each split into
//                  A_g (length alpha(g)) followed by B_g (length beta(g)).
//                  A draw is reported as token 0 (A side) or 1 (B side),
//                  together with the real number when one was sampled.

#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "boundary_walk/measure.hpp"
#include "boundary_walk/path.hpp"
#include "boundary_walk/stopping.hpp"

namespace boundary_walk {

struct DiscreteAux {
  std::vector<Scalar> points;
  std::vector<Scalar> weights;
};

struct IntervalCell {
  GroupElement element;
  Scalar lower;
  Scalar alpha;  // |A_g|
  Scalar beta;   // |B_g|
};

struct UnitIntervalAux {
  std::vector<IntervalCell> cells;
};

class AuxSpace {
 public:
  // Weights nonnegative, summing to one, same mode throughout.
  static AuxSpace discrete(std::vector<Scalar> points,
                           std::vector<Scalar> weights);
  // Cells from a split alpha + beta = mu. Either part may be empty.
  // Throws InvalidArgument if the parts do not add up to mu or mu is not a
  // probability measure.
  static AuxSpace unit_interval(const FiniteMeasure& mu, const SplitPair& split);

  bool is_discrete() const {
    return std::holds_alternative<DiscreteAux>(space_);
  }
  const DiscreteAux& as_discrete() const {
    return std::get<DiscreteAux>(space_);
  }
  const UnitIntervalAux& as_interval() const {
    return std::get<UnitIntervalAux>(space_);
  }
  Arithmetic arithmetic() const { return mode_; }

  // For interval spaces: true iff the cells are exactly those of `mu`.
  bool partitions(const FiniteMeasure& mu) const;

  friend bool operator==(const AuxSpace& a, const AuxSpace& b);

 private:
  AuxSpace(std::variant<DiscreteAux, UnitIntervalAux> space, Arithmetic mode)
      : space_(std::move(space)), mode_(mode) {}

  std::variant<DiscreteAux, UnitIntervalAux> space_;
  Arithmetic mode_;
};

struct AuxDraw {
  // Point index (Discrete) or 0 / 1 for A_g / B_g (UnitInterval).
  std::int64_t token = 0;
  // The sampled real number for UnitInterval draws.
  double u = 0;
};

struct ExtendedStep {
  GroupElement increment;
  AuxDraw gamma;
};

class ExtendedPrefix {
 public:
  explicit ExtendedPrefix(GroupSpec group) : group_(group) {}

  void push_back(ExtendedStep step) { steps_.push_back(std::move(step)); }

  std::size_t length() const { return steps_.size(); }
  const GroupSpec& group() const { return group_; }
  const std::vector<ExtendedStep>& steps() const { return steps_; }

  // The group coordinates as a plain path from e.
  PathPrefix projection() const;
  // The same steps as fed to stopping rules.
  std::vector<Step> rule_steps() const;

 private:
  GroupSpec group_;
  std::vector<ExtendedStep> steps_;
};

// Steps of the extended chain as seen by rules: increment h with law mu and
// an aux token. Uncoupled: gamma is drawn independently of h, and for
// interval spaces the token is 1 iff gamma >= alpha(h) / mu(h), so gamma acts
// as the coin of a beta(h) / mu(h) Bernoulli trial. Coupled (interval spaces
// only): gamma is uniform, h is the element whose cell contains gamma, and
// the token says which side of the cell gamma fell in.
class ExtendedStepSource final : public StepSource {
 public:
  ExtendedStepSource(const FiniteMeasure& mu, const AuxSpace& aux,
                     bool coupled);

  Step next(CounterRng& rng) const override;
  ExtendedStep next_extended(CounterRng& rng) const;

 private:
  IncrementSampler sampler_;
  bool discrete_;
  bool coupled_;
  std::vector<double> aux_cumulative_;  // discrete point CDF
  std::vector<GroupElement> cell_elements_;
  std::vector<double> cell_upper_;      // right ends of the cells
  std::vector<double> cell_lower_;
  std::vector<double> cell_split_;      // right end of A_g
  std::vector<double> beta_ratio_;      // alpha(g) / mu(g), per support index
};

// Increments i.i.d. mu with aux draws as described for ExtendedStepSource.
// Throws InvalidArgument for coupled sampling over a discrete space.
ExtendedPrefix sample_extended(const FiniteMeasure& mu, const AuxSpace& aux,
                               std::size_t length, SeededStream stream,
                               bool coupled);

// Exact joint law of (increment, token): mu(h) a_i for discrete spaces,
// alpha(g) and beta(g) for the two sides of an interval cell.
StepLaw extended_step_law(const FiniteMeasure& mu, const AuxSpace& aux);

// T = gamma_1: the value of the first draw. Points must be positive
// integers; throws InvalidArgument otherwise.
StoppingRule aux_first_coordinate_rule(const AuxSpace& aux);

// T = first n whose draw lands in some B_g. Requires an interval space.
StoppingRule beta_flag_rule(const AuxSpace& aux);

// The aux space a rule built above was bound to, or nullptr for plain rules.
const AuxSpace* bound_aux(const StoppingRule& rule);

enum class Engine { kExact, kMonteCarlo };

struct ProjectionOptions {
  Engine engine = Engine::kExact;
  Scalar epsilon = Scalar::power_of_two(Arithmetic::kExact, -20);
  std::size_t max_horizon = kDefaultMaxHorizon;
  MonteCarloOptions monte_carlo;
  bool coupled = false;
};

// Law of x_T under the extended chain, projected to G. Throws
// InvalidArgument when the rule is bound to a different aux space, or when
// an interval space does not partition mu.
TransformResult project_transform(const FiniteMeasure& mu, const AuxSpace& aux,
                                  const StoppingRule& rule,
                                  const ProjectionOptions& options);

}  // namespace boundary_walk
