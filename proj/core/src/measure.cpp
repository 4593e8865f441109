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

#include "boundary_walk/measure.hpp"

#include <cmath>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

namespace {

void require_compatible(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.group() != b.group()) {
    throw GroupMismatch("measures on " + a.group().name() + " and " +
                        b.group().name());
  }
  if (a.arithmetic() != b.arithmetic()) {
    throw ArithmeticMismatch("measures in exact and float mode");
  }
}

bool near_one(const Scalar& s) {
  if (s.is_exact()) return s == Scalar::one(Arithmetic::kExact);
  return std::abs(s.to_double() - 1.0) <= kProbabilityTolerance;
}

void require_nondegenerate(const SplitPair& split, const FiniteMeasure& mu) {
  if (split.alpha.empty() || split.beta.empty()) {
    throw DegenerateSplit("split leaves one part with zero mass");
  }
  if (split.alpha.mass() >= mu.mass() || split.beta.mass() >= mu.mass()) {
    throw DegenerateSplit("split part carries the whole mass");
  }
}

}  // namespace

FiniteMeasure::FiniteMeasure(GroupSpec group, Arithmetic mode)
    : group_(group), mode_(mode), mass_(Scalar::zero(mode)) {}

FiniteMeasure FiniteMeasure::dirac(const GroupElement& g, Arithmetic mode) {
  FiniteMeasure m(g.group(), mode);
  m.add(g, Scalar::one(mode));
  return m;
}

FiniteMeasure FiniteMeasure::from_weights(
    GroupSpec group, Arithmetic mode,
    const std::vector<std::pair<GroupElement, Scalar>>& weights) {
  FiniteMeasure m(group, mode);
  for (const auto& [g, w] : weights) m.add(g, w);
  return m;
}

FiniteMeasure FiniteMeasure::uniform(const std::vector<GroupElement>& support,
                                     Arithmetic mode) {
  if (support.empty()) throw InvalidArgument("uniform measure needs support");
  const std::set<GroupElement> distinct(support.begin(), support.end());
  FiniteMeasure m(support.front().group(), mode);
  const Scalar w =
      Scalar::ratio(mode, 1, static_cast<long>(distinct.size()));
  for (const auto& g : distinct) m.add(g, w);
  return m;
}

void FiniteMeasure::add(const GroupElement& g, const Scalar& w) {
  if (g.group() != group_) {
    throw GroupMismatch("element of " + g.group().name() +
                        " added to a measure on " + group_.name());
  }
  if (w.mode() != mode_) throw ArithmeticMismatch("weight in the wrong mode");
  if (w.sign() < 0) throw InvalidArgument("negative weight");
  if (w.is_zero()) return;
  auto [it, inserted] = weights_.try_emplace(g, w);
  if (!inserted) it->second += w;
  mass_ += w;
}

Scalar FiniteMeasure::weight(const GroupElement& g) const {
  const auto it = weights_.find(g);
  return it == weights_.end() ? Scalar::zero(mode_) : it->second;
}

bool FiniteMeasure::is_probability() const { return near_one(mass_); }

std::vector<GroupElement> FiniteMeasure::support() const {
  std::vector<GroupElement> out;
  out.reserve(weights_.size());
  for (const auto& [g, w] : weights_) out.push_back(g);
  return out;
}

FiniteMeasure FiniteMeasure::scaled(const Scalar& factor) const {
  FiniteMeasure out(group_, mode_);
  for (const auto& [g, w] : weights_) out.add(g, w * factor);
  return out;
}

FiniteMeasure FiniteMeasure::restricted(
    const std::function<bool(const GroupElement&)>& keep) const {
  FiniteMeasure out(group_, mode_);
  for (const auto& [g, w] : weights_) {
    if (keep(g)) out.add(g, w);
  }
  return out;
}

FiniteMeasure FiniteMeasure::in_mode(Arithmetic mode) const {
  FiniteMeasure out(group_, mode);
  for (const auto& [g, w] : weights_) out.add(g, w.in_mode(mode));
  return out;
}

bool operator==(const FiniteMeasure& a, const FiniteMeasure& b) {
  if (a.group_ != b.group_ || a.mode_ != b.mode_) return false;
  if (a.weights_.size() != b.weights_.size()) return false;
  auto it = b.weights_.begin();
  for (const auto& [g, w] : a.weights_) {
    if (g != it->first || w != it->second) return false;
    ++it;
  }
  return true;
}

FiniteMeasure convolve(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  require_compatible(mu, nu);
  FiniteMeasure out(mu.group(), mu.arithmetic());
  // Sum over pairs (h, k) with h k = g, which is the same as summing
  // mu(h) nu(h^-1 g) over h.
  for (const auto& [h, a] : mu) {
    for (const auto& [k, b] : nu) out.add(h * k, a * b);
  }
  return out;
}

FiniteMeasure convolution_power(const FiniteMeasure& mu, std::size_t n) {
  FiniteMeasure result =
      FiniteMeasure::dirac(identity(mu.group()), mu.arithmetic());
  for (std::size_t i = 0; i < n; ++i) result = convolve(result, mu);
  return result;
}

FiniteMeasure convex_combine(
    const std::vector<std::pair<Scalar, FiniteMeasure>>& terms) {
  if (terms.empty()) throw InvalidArgument("empty convex combination");
  const FiniteMeasure& first = terms.front().second;
  Scalar total = Scalar::zero(first.arithmetic());
  FiniteMeasure out(first.group(), first.arithmetic());
  for (const auto& [coefficient, measure] : terms) {
    require_compatible(first, measure);
    if (coefficient.sign() < 0) {
      throw InvalidArgument("negative convex coefficient");
    }
    total += coefficient;
    for (const auto& [g, w] : measure) out.add(g, coefficient * w);
  }
  if (!near_one(total)) {
    throw InvalidArgument("convex coefficients sum to " + total.to_string());
  }
  return out;
}

NeumannPlan plan_neumann_series(const Scalar& alpha_mass,
                                const Scalar& beta_mass, const Scalar& epsilon,
                                std::size_t max_terms) {
  const Arithmetic mode = alpha_mass.mode();
  const Scalar one = Scalar::one(mode);
  if (epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive");
  if (alpha_mass >= one) {
    throw ConvergenceError("Neumann series diverges: |alpha| >= 1");
  }
  // Tail after summing n = 0..N is |alpha|^{N+1} |beta| / (1 - |alpha|).
  const Scalar ratio = beta_mass / (one - alpha_mass);
  Scalar power = alpha_mass;
  for (std::size_t terms = 1; terms <= max_terms; ++terms) {
    const Scalar tail = power * ratio;
    if (tail <= epsilon) return {terms, tail};
    power *= alpha_mass;
  }
  throw ConvergenceError("Neumann series needs more than " +
                         std::to_string(max_terms) + " terms");
}

FiniteMeasure neumann_series(const FiniteMeasure& alpha,
                             const FiniteMeasure& beta, const Scalar& epsilon,
                             std::size_t max_terms) {
  require_compatible(alpha, beta);
  const NeumannPlan plan =
      plan_neumann_series(alpha.mass(), beta.mass(),
                          epsilon.in_mode(alpha.arithmetic()), max_terms);
  FiniteMeasure sum(alpha.group(), alpha.arithmetic());
  FiniteMeasure term = beta;  // alpha^{*n} * beta
  for (std::size_t n = 0; n < plan.terms; ++n) {
    for (const auto& [g, w] : term) sum.add(g, w);
    if (n + 1 < plan.terms) term = convolve(alpha, term);
  }
  return sum;
}

SplitPair split_by_support(const FiniteMeasure& mu,
                           const std::set<GroupElement>& b) {
  if (b.empty()) throw InvalidArgument("split set must be nonempty");
  SplitPair split{mu.restricted([&b](const GroupElement& g) {
                    return b.count(g) == 0;
                  }),
                  mu.restricted([&b](const GroupElement& g) {
                    return b.count(g) != 0;
                  })};
  require_nondegenerate(split, mu);
  return split;
}

SplitPair split_by_fraction(const FiniteMeasure& mu,
                            const std::map<GroupElement, Scalar>& fraction) {
  const Arithmetic mode = mu.arithmetic();
  const Scalar zero = Scalar::zero(mode);
  const Scalar one = Scalar::one(mode);
  SplitPair split{FiniteMeasure(mu.group(), mode),
                  FiniteMeasure(mu.group(), mode)};
  for (const auto& [g, w] : mu) {
    const auto it = fraction.find(g);
    const Scalar f = it == fraction.end() ? zero : it->second.in_mode(mode);
    if (f < zero || f > one) {
      throw InvalidArgument("split fraction outside [0, 1]");
    }
    split.beta.add(g, f * w);
    split.alpha.add(g, (one - f) * w);
  }
  require_nondegenerate(split, mu);
  return split;
}

SplitPair threshold_split(const FiniteMeasure& tau,
                          const std::map<GroupElement, Scalar>& ref,
                          const Scalar& c) {
  const Arithmetic mode = tau.arithmetic();
  if (c.sign() <= 0) throw InvalidArgument("threshold must be positive");
  const Scalar threshold = c.in_mode(mode);
  SplitPair split{FiniteMeasure(tau.group(), mode),
                  FiniteMeasure(tau.group(), mode)};
  for (const auto& [g, w] : tau) {
    const auto it = ref.find(g);
    if (it == ref.end() || it->second.sign() <= 0) {
      throw InvalidArgument("reference weights must cover supp(tau)");
    }
    if (w / it->second.in_mode(mode) < threshold) {
      split.beta.add(g, w);
    } else {
      split.alpha.add(g, w);
    }
  }
  if (split.beta.empty()) {
    throw DegenerateSplit("threshold set is empty; choose a larger c");
  }
  if (split.alpha.empty()) {
    throw DegenerateSplit("threshold set swallows all of tau");
  }
  return split;
}

Scalar total_variation(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  require_compatible(mu, nu);
  Scalar sum = Scalar::zero(mu.arithmetic());
  auto a = mu.begin();
  auto b = nu.begin();
  while (a != mu.end() || b != nu.end()) {
    if (b == nu.end() || (a != mu.end() && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == mu.end() || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += (a->second - b->second).abs();
      ++a;
      ++b;
    }
  }
  return sum / Scalar::integer(mu.arithmetic(), 2);
}

double shannon_entropy(const FiniteMeasure& mu) {
  if (!mu.is_probability()) {
    throw InvalidArgument("entropy needs a probability measure");
  }
  double h = 0;
  for (const auto& [g, w] : mu) {
    const double p = w.to_double();
    h -= p * std::log(p);
  }
  return h;
}

bool support_generates(const FiniteMeasure& mu, int radius) {
  std::set<GroupElement> steps;
  for (const auto& [g, w] : mu) {
    steps.insert(g);
    steps.insert(inverse(g));
  }
  std::set<GroupElement> reached{identity(mu.group())};
  std::vector<GroupElement> frontier(reached.begin(), reached.end());
  for (int r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : steps) {
        auto y = x * s;
        if (reached.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  for (const auto& gen : standard_generators(mu.group())) {
    if (reached.count(gen) == 0) return false;
  }
  return true;
}

}  // namespace boundary_walk
