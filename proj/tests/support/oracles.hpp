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

// Reference computations used as oracles by the tests. They deliberately
// avoid the library's engines: path-by-path enumeration instead of merged
// frontiers, stop times defined on whole prefixes instead of automata, and
// plain linear algebra instead of sampling.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "boundary_walk/group.hpp"
#include "boundary_walk/measure.hpp"
#include "boundary_walk/scalar.hpp"

namespace boundary_walk::testing {

inline Scalar Q(long num, long den = 1) {
  return Scalar::ratio(Arithmetic::kExact, num, den);
}

inline GroupElement Z(std::int64_t n) { return lattice_element({n}); }

inline FiniteMeasure simple_walk(const GroupSpec& group,
                                 Arithmetic mode = Arithmetic::kExact) {
  return FiniteMeasure::uniform(standard_generators(group), mode);
}

// Weight table keyed by element; no FiniteMeasure involved.
using Table = std::map<GroupElement, Scalar>;

inline Table table_of(const FiniteMeasure& m) {
  Table t;
  for (const auto& [g, w] : m) t.emplace(g, w);
  return t;
}

// 1/2 sum |a - b| over the union of supports, exact.
inline Scalar table_tv(const Table& a, const Table& b) {
  Scalar sum = Scalar::zero(Arithmetic::kExact);
  std::set<GroupElement> keys;
  for (const auto& [g, w] : a) keys.insert(g);
  for (const auto& [g, w] : b) keys.insert(g);
  for (const auto& g : keys) {
    const auto ia = a.find(g);
    const auto ib = b.find(g);
    Scalar x = ia == a.end() ? Scalar::zero(Arithmetic::kExact) : ia->second;
    Scalar y = ib == b.end() ? Scalar::zero(Arithmetic::kExact) : ib->second;
    sum += (x - y).abs();
  }
  return sum * Q(1, 2);
}

// mu^{*n} by multiplying out every one of the |supp mu|^n increment words.
inline Table brute_power(const FiniteMeasure& mu, std::size_t n) {
  std::vector<std::pair<GroupElement, Scalar>> atoms(mu.begin(), mu.end());
  Table out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    GroupElement x = identity(mu.group());
    Scalar w = Q(1);
    for (std::size_t i : idx) {
      x = x * atoms[i].first;
      w *= atoms[i].second;
    }
    auto [it, fresh] = out.emplace(x, w);
    if (!fresh) it->second += w;
    std::size_t k = 0;
    while (k < n && ++idx[k] == atoms.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

// One step of a (possibly extended) walk: increment, aux token, probability.
struct RefStep {
  GroupElement increment;
  std::int64_t token;
  Scalar p;
};

// A stop time defined on whole prefixes: returns T if the prefix already
// determines T <= prefix length, nullopt otherwise.
using RefTime = std::function<std::optional<std::size_t>(
    const std::vector<GroupElement>& h, const std::vector<std::int64_t>& tok)>;

inline RefTime ref_constant(std::size_t n) {
  return [n](const std::vector<GroupElement>& h,
             const std::vector<std::int64_t>&) -> std::optional<std::size_t> {
    if (h.size() >= n) return n;
    return std::nullopt;
  };
}

inline RefTime ref_first_visit(std::set<GroupElement> a) {
  return [a](const std::vector<GroupElement>& h,
             const std::vector<std::int64_t>&) -> std::optional<std::size_t> {
    if (h.empty()) return std::nullopt;
    GroupElement x = identity(h.front().group());
    for (std::size_t i = 0; i < h.size(); ++i) {
      x = x * h[i];
      if (a.count(x)) return i + 1;
    }
    return std::nullopt;
  };
}

inline RefTime ref_first_increment(std::set<GroupElement> b) {
  return [b](const std::vector<GroupElement>& h,
             const std::vector<std::int64_t>&) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (b.count(h[i])) return i + 1;
    }
    return std::nullopt;
  };
}

// T1 + T2 evaluated on the increments after T1 (the shifted path U^{T1}).
inline RefTime ref_compose(RefTime t1, RefTime t2) {
  return [t1, t2](const std::vector<GroupElement>& h,
                  const std::vector<std::int64_t>& tok)
             -> std::optional<std::size_t> {
    const auto first = t1(h, tok);
    if (!first) return std::nullopt;
    std::vector<GroupElement> rest(h.begin() + *first, h.end());
    std::vector<std::int64_t> rest_tok(tok.begin() + *first, tok.end());
    const auto second = t2(rest, rest_tok);
    if (!second) return std::nullopt;
    return *first + *second;
  };
}

// T = value of the first aux draw.
inline RefTime ref_first_coordinate(std::vector<std::size_t> values) {
  return [values](const std::vector<GroupElement>& h,
                  const std::vector<std::int64_t>& tok)
             -> std::optional<std::size_t> {
    if (tok.empty()) return std::nullopt;
    const std::size_t t = values[static_cast<std::size_t>(tok[0])];
    if (h.size() >= t) return t;
    return std::nullopt;
  };
}

// T = first n whose token is 1.
inline RefTime ref_flag() {
  return [](const std::vector<GroupElement>&,
            const std::vector<std::int64_t>& tok) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] == 1) return i + 1;
    }
    return std::nullopt;
  };
}

struct Enumeration {
  Table stopped;
  Scalar unstopped = Q(0);
};

// Depth-first walk over every step sequence up to `depth`, no merging.
// A branch ends as soon as the reference time says it has stopped.
inline Enumeration enumerate_stops(const std::vector<RefStep>& steps,
                                   const RefTime& time, std::size_t depth) {
  Enumeration out;
  std::vector<GroupElement> h;
  std::vector<std::int64_t> tok;
  std::function<void(const GroupElement&, const Scalar&)> visit =
      [&](const GroupElement& x, const Scalar& w) {
        for (const auto& s : steps) {
          h.push_back(s.increment);
          tok.push_back(s.token);
          const GroupElement y = x * s.increment;
          const Scalar wy = w * s.p;
          const auto t = time(h, tok);
          if (t) {
            auto [it, fresh] = out.stopped.emplace(y, wy);
            if (!fresh) it->second += wy;
          } else if (h.size() < depth) {
            visit(y, wy);
          } else {
            out.unstopped += wy;
          }
          h.pop_back();
          tok.pop_back();
        }
      };
  visit(identity(steps.front().increment.group()), Q(1));
  return out;
}

inline std::vector<RefStep> plain_steps(const FiniteMeasure& mu) {
  std::vector<RefStep> out;
  for (const auto& [g, w] : mu) out.push_back({g, 0, w});
  return out;
}

// Harmonic measure of the cylinder of `prefix` for simple random walk on
// F_2, solved by Gauss-Seidel on the ball of the given radius with boundary
// values 1 (word starts with the prefix) or 0. Returns values on the ball.
inline std::map<GroupElement, double> cylinder_linear_solve(
    const std::vector<int>& prefix, int radius, int sweeps = 4000) {
  const GroupSpec f2 = GroupSpec::free(2);
  const auto ball = word_ball(f2, radius);
  const auto gens = standard_generators(f2);
  std::map<GroupElement, double> f;
  auto starts = [&](const GroupElement& g) {
    const auto& w = g.as_word().letters;
    return w.size() >= prefix.size() &&
           std::equal(prefix.begin(), prefix.end(), w.begin());
  };
  for (const auto& g : ball) f[g] = starts(g) ? 1.0 : 0.0;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double change = 0;
    for (const auto& g : ball) {
      if (static_cast<int>(word_length(g)) == radius) continue;
      double s = 0;
      for (const auto& a : gens) s += 0.25 * f.at(g * a);
      change = std::max(change, std::abs(s - f[g]));
      f[g] = s;
    }
    if (change < 1e-15) break;
  }
  return f;
}

// Shannon entropy (nats) of Binomial(n, 1/2).
inline double binomial_entropy(int n) {
  double h = 0;
  for (int k = 0; k <= n; ++k) {
    const double p = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0) - n * std::log(2.0));
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace boundary_walk::testing
