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

#include <cmath>

#include "boundary_walk/error.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace boundary_walk {
namespace {

using testing::enumerate_stops;
using testing::plain_steps;
using testing::Q;
using testing::RefTime;
using testing::simple_walk;
using testing::table_of;
using testing::table_tv;
using testing::Z;

constexpr Arithmetic kExact = Arithmetic::kExact;

// Exact engine at a fixed depth against path-by-path enumeration.
void ExpectMatchesEnumeration(const FiniteMeasure& mu, const StoppingRule& rule,
                              const RefTime& ref, std::size_t depth) {
  const auto want = enumerate_stops(plain_steps(mu), ref, depth);
  const auto got = exact_transform(mu, rule, Scalar::power_of_two(kExact, -400),
                                   depth);
  EXPECT_EQ(table_tv(table_of(got.measure), want.stopped), Q(0)) << rule.describe();
  EXPECT_EQ(got.mass_deficit, want.unstopped) << rule.describe();
}

TEST(ExactTransformTest, ConstantTimeIsConvolutionPower) {
  for (const auto& group : {GroupSpec::cyclic(2), GroupSpec::lattice(1),
                            GroupSpec::free(2), GroupSpec::lamplighter(1)}) {
    const auto mu = simple_walk(group);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto r = exact_transform(mu, constant_rule(n), Q(1, 1000));
      EXPECT_EQ(r.measure, convolution_power(mu, n)) << group.name() << n;
      EXPECT_EQ(r.mass_deficit, Q(0));
      EXPECT_FALSE(r.truncated);
      EXPECT_NEAR(r.mean_stopping_time, static_cast<double>(n), 1e-12);
    }
  }
}

TEST(ExactTransformTest, RulesMatchEnumeration) {
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto f2 = simple_walk(GroupSpec::free(2));
  const auto a = free_element(2, {1});
  const auto b = free_element(2, {2});
  const auto bi = free_element(2, {-2});

  ExpectMatchesEnumeration(z, first_visit_rule({Z(2), Z(-1)}),
                           testing::ref_first_visit({Z(2), Z(-1)}), 10);
  ExpectMatchesEnumeration(z, first_increment_rule({Z(-1)}),
                           testing::ref_first_increment({Z(-1)}), 10);
  ExpectMatchesEnumeration(
      f2, first_increment_rule({b, bi}), testing::ref_first_increment({b, bi}), 6);
  ExpectMatchesEnumeration(f2, first_visit_rule({a * a}),
                           testing::ref_first_visit({a * a}), 6);
  ExpectMatchesEnumeration(
      z, sequential_compose(constant_rule(2), first_increment_rule({Z(-1)})),
      testing::ref_compose(testing::ref_constant(2),
                           testing::ref_first_increment({Z(-1)})),
      10);
  ExpectMatchesEnumeration(
      z,
      sequential_compose(first_visit_rule({Z(1)}), first_visit_rule({Z(1)})),
      testing::ref_compose(testing::ref_first_visit({Z(1)}),
                           testing::ref_first_visit({Z(1)})),
      10);
  ExpectMatchesEnumeration(
      f2, sequential_compose(first_increment_rule({b, bi}), constant_rule(2)),
      testing::ref_compose(testing::ref_first_increment({b, bi}),
                           testing::ref_constant(2)),
      6);
}

TEST(ExactTransformTest, CompositionIsConvolution) {
  // mu_{T1 + T2 o U^T1} = mu_T1 * mu_T2 for any pair of stopping times.
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto t1 = first_increment_rule({Z(-1)});
  const auto t2 = first_increment_rule({Z(1)});
  const auto eps = Scalar::power_of_two(kExact, -30);
  const auto lhs = exact_transform(z, sequential_compose(t1, t2), eps);
  const auto rhs = convolve(exact_transform(z, t1, eps).measure,
                            exact_transform(z, t2, eps).measure);
  EXPECT_LE(table_tv(table_of(lhs.measure), table_of(rhs)).to_double(), 2e-9);
}

TEST(ExactTransformTest, GeometricLaw) {
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto r = exact_transform(z, first_increment_rule({Z(-1)}),
                                 default_epsilon(kExact));
  EXPECT_LE(r.mass_deficit, default_epsilon(kExact));
  for (long k = -1; k <= 17; ++k) {
    EXPECT_EQ(r.measure.weight(Z(k)), Q(1, 1L << (k + 2))) << k;
  }
  EXPECT_FALSE(r.truncated);
}

TEST(ExactTransformTest, FlagsTruncation) {
  // First visit to 5 on the simple walk has a heavy tail.
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto r = exact_transform(z, first_visit_rule({Z(5)}), Q(1, 1000), 20);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.horizon, 20u);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.measure.mass() + r.mass_deficit, Q(1));
}

TEST(ExactTransformTest, CyclicFirstReturn) {
  const auto mu = FiniteMeasure::dirac(cyclic_element(2, 1), kExact);
  const auto r = exact_transform(mu, first_visit_rule({cyclic_element(2, 0)}),
                                 default_epsilon(kExact));
  EXPECT_EQ(r.measure, FiniteMeasure::dirac(cyclic_element(2, 0), kExact));
  EXPECT_EQ(r.mass_deficit, Q(0));
  EXPECT_EQ(r.horizon, 2u);
}

TEST(ExactTransformTest, PredicateRuleWarnsButAgrees) {
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto pred = rule_from_predicate("reach two", [](const PathPrefix& p) {
    return p.end_position() == Z(2);
  });
  EXPECT_FALSE(pred.has_decision_state());
  const auto a = exact_transform(z, pred, Q(1, 1000), 8);
  const auto b = exact_transform(z, first_visit_rule({Z(2)}), Q(1, 1000), 8);
  EXPECT_EQ(a.measure, b.measure);
  EXPECT_EQ(a.mass_deficit, b.mass_deficit);
  EXPECT_FALSE(a.warnings.empty());
}

TEST(StoppingRuleTest, StopTimeOnPrefix) {
  const PathPrefix p(Z(0), {Z(1), Z(-1), Z(-1), Z(1)});
  EXPECT_EQ(first_visit_rule({Z(-1)}).stop_time(p), 3u);
  EXPECT_EQ(first_increment_rule({Z(-1)}).stop_time(p), 2u);
  EXPECT_EQ(constant_rule(5).stop_time(p), std::nullopt);
  EXPECT_EQ(constant_rule(5).verdict(p), Verdict::kContinue);
  EXPECT_EQ(constant_rule(4).verdict(p), Verdict::kStop);
}

TEST(StoppingRuleTest, IteratesOnShiftedPaths) {
  const PathPrefix p(Z(0), {Z(1), Z(-1), Z(1), Z(1), Z(-1), Z(-1), Z(1)});
  const auto stops = iterate_stops(first_increment_rule({Z(-1)}), p);
  EXPECT_EQ(stops, (std::vector<std::size_t>{2, 5, 6}));
  // Each gap equals T on the path shifted to the previous stop.
  const auto rule = first_increment_rule({Z(-1)});
  std::size_t prev = 0;
  for (std::size_t t : stops) {
    EXPECT_EQ(rule.stop_time(increment_shift(p, prev)), t - prev);
    prev = t;
  }
  EXPECT_EQ(iterate_stops(constant_rule(3), p),
            (std::vector<std::size_t>{3, 6}));
}

TEST(StoppingRuleTest, ComposeHorizonBounds) {
  EXPECT_EQ(sequential_compose(constant_rule(2), constant_rule(3)).horizon_bound(),
            5u);
  EXPECT_EQ(sequential_compose(constant_rule(2), first_visit_rule({Z(1)}))
                .horizon_bound(),
            std::nullopt);
}

TEST(MonteCarloTest, AgreesWithExact) {
  FiniteMeasure mu(GroupSpec::lattice(1), kExact);
  mu.add(Z(1), Q(2, 3));
  mu.add(Z(-1), Q(1, 3));
  const auto rule = first_visit_rule({Z(2)});
  const auto exact = exact_transform(mu, rule, Scalar::power_of_two(kExact, -30));
  MonteCarloOptions opts;
  opts.samples = 100000;
  opts.stream = SeededStream{11, 0};
  const auto mc = monte_carlo_transform(mu, rule, opts);
  EXPECT_EQ(mc.measure.arithmetic(), kExact);
  EXPECT_LT(total_variation(mc.measure, exact.measure).to_double(), 5e-3);
}

TEST(MonteCarloTest, WorkerCountDoesNotChangeResult) {
  const auto f2 = simple_walk(GroupSpec::free(2));
  const auto rule = first_increment_rule({free_element(2, {2})});
  MonteCarloOptions opts;
  opts.samples = 20000;
  opts.stream = SeededStream{3, 1};
  const auto one = monte_carlo_transform(f2, rule, opts);
  opts.workers = 4;
  const auto four = monte_carlo_transform(f2, rule, opts);
  EXPECT_EQ(one.measure, four.measure);
  EXPECT_EQ(one.mean_stopping_time, four.mean_stopping_time);
}

TEST(MonteCarloTest, ErrorShrinksWithSamples) {
  const auto z = simple_walk(GroupSpec::lattice(1));
  const auto rule = first_increment_rule({Z(-1)});
  const auto exact = exact_transform(z, rule, Scalar::power_of_two(kExact, -40));
  double previous = 1;
  for (std::size_t n : {1000u, 16000u, 256000u}) {
    MonteCarloOptions opts;
    opts.samples = n;
    opts.stream = SeededStream{31, n};
    const double tv =
        total_variation(monte_carlo_transform(z, rule, opts).measure, exact.measure)
            .to_double();
    // A 16x larger sample should cut the error roughly 4x.
    EXPECT_LT(tv, 3.0 / std::sqrt(static_cast<double>(n))) << n;
    EXPECT_LT(tv, previous) << n;
    previous = tv;
  }
}

TEST(MonteCarloTest, HorizonCapBelowConstantTime) {
  MonteCarloOptions opts;
  opts.samples = 100;
  opts.horizon_cap = 1;
  const auto r = monte_carlo_transform(simple_walk(GroupSpec::lattice(1)),
                                       constant_rule(2), opts);
  EXPECT_TRUE(r.measure.empty());
  EXPECT_EQ(r.mass_deficit, Q(1));
}

TEST(MonteCarloTest, ReportsUnstoppedPaths) {
  const auto z = simple_walk(GroupSpec::lattice(1));
  MonteCarloOptions opts;
  opts.samples = 2000;
  opts.horizon_cap = 5;
  const auto r = monte_carlo_transform(z, first_visit_rule({Z(5)}), opts);
  EXPECT_GT(r.mass_deficit, Q(0));
  EXPECT_FALSE(r.warnings.empty());
}

}  // namespace
}  // namespace boundary_walk
