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

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "boundary_walk/group.hpp"
#include "boundary_walk/scalar.hpp"

namespace boundary_walk {

// |mass - 1| below this makes a float measure a probability measure.
inline constexpr double kProbabilityTolerance = 1e-9;

// Finitely supported nonnegative measure on one group, in one arithmetic
// mode. Zero weights are never stored; the total mass is cached. The support
// iterates in canonical element order.
class FiniteMeasure {
 public:
  using Map = std::map<GroupElement, Scalar>;
  using const_iterator = Map::const_iterator;

  FiniteMeasure(GroupSpec group, Arithmetic mode);

  static FiniteMeasure dirac(const GroupElement& g, Arithmetic mode);
  static FiniteMeasure from_weights(
      GroupSpec group, Arithmetic mode,
      const std::vector<std::pair<GroupElement, Scalar>>& weights);
  // Equal weight 1/n on each of the n distinct elements.
  static FiniteMeasure uniform(const std::vector<GroupElement>& support,
                               Arithmetic mode);

  // Adds `w` to the weight at g. Throws InvalidArgument for negative w,
  // GroupMismatch / ArithmeticMismatch for foreign inputs.
  void add(const GroupElement& g, const Scalar& w);

  Scalar weight(const GroupElement& g) const;
  const Scalar& mass() const { return mass_; }
  bool is_probability() const;

  const GroupSpec& group() const { return group_; }
  Arithmetic arithmetic() const { return mode_; }
  bool empty() const { return weights_.empty(); }
  std::size_t support_size() const { return weights_.size(); }
  std::vector<GroupElement> support() const;
  bool contains(const GroupElement& g) const { return weights_.count(g) != 0; }

  const_iterator begin() const { return weights_.begin(); }
  const_iterator end() const { return weights_.end(); }

  FiniteMeasure scaled(const Scalar& factor) const;
  FiniteMeasure restricted(
      const std::function<bool(const GroupElement&)>& keep) const;
  // Same weights converted to `mode`.
  FiniteMeasure in_mode(Arithmetic mode) const;

  // Structural equality of supports and weights.
  friend bool operator==(const FiniteMeasure& a, const FiniteMeasure& b);

 private:
  GroupSpec group_;
  Arithmetic mode_;
  Map weights_;
  Scalar mass_;
};

// alpha + beta = original measure, pointwise.
struct SplitPair {
  FiniteMeasure alpha;
  FiniteMeasure beta;
};

// (mu * nu)(g) = sum_h mu(h) nu(h^-1 g). Mass multiplies.
FiniteMeasure convolve(const FiniteMeasure& mu, const FiniteMeasure& nu);

// mu^{*0} = delta_e, mu^{*n} = mu^{*(n-1)} * mu.
FiniteMeasure convolution_power(const FiniteMeasure& mu, std::size_t n);

// Pointwise sum of coefficient * measure. Coefficients must be nonnegative
// and sum to one (exactly in exact mode, within kProbabilityTolerance
// otherwise).
FiniteMeasure convex_combine(
    const std::vector<std::pair<Scalar, FiniteMeasure>>& terms);

// Truncated Neumann series sum_{n=0}^{N} alpha^{*n} * beta, where N is the
// first index whose geometric tail |alpha|^{N+1} |beta| / (1 - |alpha|) is at
// most epsilon. Throws ConvergenceError when |alpha| >= 1 or when more than
// max_terms terms would be needed.
FiniteMeasure neumann_series(const FiniteMeasure& alpha,
                             const FiniteMeasure& beta, const Scalar& epsilon,
                             std::size_t max_terms);

// Number of terms neumann_series would sum, and the tail bound it certifies.
struct NeumannPlan {
  std::size_t terms = 0;
  Scalar tail;
};
NeumannPlan plan_neumann_series(const Scalar& alpha_mass,
                                const Scalar& beta_mass, const Scalar& epsilon,
                                std::size_t max_terms);

// beta = mu restricted to b, alpha = the rest. Both parts must carry
// positive mass.
SplitPair split_by_support(const FiniteMeasure& mu,
                           const std::set<GroupElement>& b);

// beta(g) = fraction(g) mu(g), alpha(g) = (1 - fraction(g)) mu(g). Elements
// missing from `fraction` get fraction 0.
SplitPair split_by_fraction(const FiniteMeasure& mu,
                            const std::map<GroupElement, Scalar>& fraction);

// Density threshold split: beta = tau restricted to
// {g : tau(g) / ref(g) < c}, alpha = the remainder. Throws DegenerateSplit
// when that set is empty (choose a larger c) or swallows all of tau.
SplitPair threshold_split(const FiniteMeasure& tau,
                          const std::map<GroupElement, Scalar>& ref,
                          const Scalar& c);

// 1/2 sum_g |mu(g) - nu(g)|, in the measures' arithmetic mode.
Scalar total_variation(const FiniteMeasure& mu, const FiniteMeasure& nu);

// -sum mu(g) log mu(g), natural log. Requires a probability measure.
double shannon_entropy(const FiniteMeasure& mu);

// Heuristic generation check: true iff every standard generator lies in the
// ball of the given radius over supp(mu) and its inverses.
bool support_generates(const FiniteMeasure& mu, int radius);

}  // namespace boundary_walk
