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

#include <cmath>

#include "boundary_walk/error.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace boundary_walk {
namespace {

using testing::enumerate_stops;
using testing::Q;
using testing::RefStep;
using testing::simple_walk;
using testing::table_of;
using testing::table_tv;
using testing::Z;

constexpr Arithmetic kExact = Arithmetic::kExact;

FiniteMeasure Shift(const GroupElement& g) {
  return FiniteMeasure::dirac(g, kExact);
}

// Product steps built directly from the measure and the aux weights.
std::vector<RefStep> DiscreteSteps(const FiniteMeasure& mu,
                                   const std::vector<Scalar>& weights) {
  std::vector<RefStep> out;
  for (const auto& [g, w] : mu) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      out.push_back({g, static_cast<std::int64_t>(i), w * weights[i]});
    }
  }
  return out;
}

std::vector<RefStep> SplitSteps(const SplitPair& s) {
  std::vector<RefStep> out;
  for (const auto& [g, w] : s.alpha) out.push_back({g, 0, w});
  for (const auto& [g, w] : s.beta) out.push_back({g, 1, w});
  return out;
}

TEST(AuxSpaceTest, Validation) {
  EXPECT_THROW(AuxSpace::discrete({Q(1)}, {Q(1, 2)}), InvalidArgument);
  EXPECT_THROW(AuxSpace::discrete({Q(1), Q(2)}, {Q(1)}), InvalidArgument);
  EXPECT_THROW(AuxSpace::discrete({Q(1), Q(2)}, {Q(3, 2), Q(-1, 2)}),
               InvalidArgument);
  const auto mu = simple_walk(GroupSpec::lattice(1));
  SplitPair bad{mu, mu};
  EXPECT_THROW(AuxSpace::unit_interval(mu, bad), InvalidArgument);
}

TEST(AuxSpaceTest, IntervalCellsTileTheUnitInterval) {
  const auto mu = simple_walk(GroupSpec::free(2));
  const auto split = split_by_fraction(mu, {{free_element(2, {1}), Q(1, 3)}});
  const auto aux = AuxSpace::unit_interval(mu, split);
  ASSERT_FALSE(aux.is_discrete());
  Scalar next = Q(0);
  for (const auto& c : aux.as_interval().cells) {
    EXPECT_EQ(c.lower, next);
    EXPECT_EQ(c.alpha + c.beta, mu.weight(c.element));
    next = c.lower + c.alpha + c.beta;
  }
  EXPECT_EQ(next, Q(1));
  EXPECT_TRUE(aux.partitions(mu));
  EXPECT_FALSE(aux.partitions(simple_walk(GroupSpec::free(3))));
}

TEST(ExtendedChainTest, ProjectionIsTheWalk) {
  // Under both readings the increments are iid mu and independent of the
  // past tokens.
  FiniteMeasure mu(GroupSpec::lattice(1), kExact);
  mu.add(Z(1), Q(1, 4));
  mu.add(Z(-1), Q(3, 4));
  const auto split = split_by_fraction(mu, {{Z(1), Q(1, 2)}, {Z(-1), Q(1, 3)}});
  const auto aux = AuxSpace::unit_interval(mu, split);
  for (bool coupled : {false, true}) {
    const auto path = sample_extended(mu, aux, 100000, SeededStream{4, 2}, coupled);
    EXPECT_TRUE(path.projection().consistent());
    int ups = 0;
    int flags = 0;
    int flags_up = 0;
    int up_after_flag = 0;
    int after_flag = 0;
    for (std::size_t i = 0; i < path.length(); ++i) {
      const auto& s = path.steps()[i];
      const bool up = s.increment == Z(1);
      ups += up;
      flags += s.gamma.token == 1;
      flags_up += up && s.gamma.token == 1;
      if (i > 0 && path.steps()[i - 1].gamma.token == 1) {
        ++after_flag;
        up_after_flag += up;
      }
    }
    const double n = 100000.0;
    EXPECT_NEAR(ups / n, 0.25, 0.006) << coupled;
    // P(token 1) = |beta| = 1/4 * 1/2 + 3/4 * 1/3 = 3/8.
    EXPECT_NEAR(flags / n, 3.0 / 8, 0.006) << coupled;
    EXPECT_NEAR(static_cast<double>(flags_up) / ups, 0.5, 0.015) << coupled;
    EXPECT_NEAR(static_cast<double>(up_after_flag) / after_flag, 0.25, 0.01)
        << coupled;
  }
}

TEST(ExtendedChainTest, UncoupledDrawIgnoresTheIncrement) {
  // The cell containing the uniform draw is independent of the increment.
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto split = split_by_support(mu, {Z(-1)});
  const auto aux = AuxSpace::unit_interval(mu, split);
  const auto path = sample_extended(mu, aux, 100000, SeededStream{6, 6}, false);
  double table[2][2] = {{0, 0}, {0, 0}};
  for (const auto& s : path.steps()) {
    table[s.increment == Z(1)][s.gamma.u >= 0.5] += 1;
  }
  const double n = static_cast<double>(path.length());
  double chi2 = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected =
          (table[i][0] + table[i][1]) * (table[0][j] + table[1][j]) / n;
      chi2 += (table[i][j] - expected) * (table[i][j] - expected) / expected;
    }
  }
  // One degree of freedom; 10.83 is the 0.999 quantile.
  EXPECT_LT(chi2, 10.83);
}

TEST(ExtendedChainTest, CoupledTokenReadsTheCell) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto split = split_by_support(mu, {Z(-1)});
  const auto aux = AuxSpace::unit_interval(mu, split);
  const auto path = sample_extended(mu, aux, 2000, SeededStream{1, 1}, true);
  for (const auto& s : path.steps()) {
    // Cells are ordered -1 then 1, each of length 1/2.
    EXPECT_EQ(s.increment == Z(-1), s.gamma.u < 0.5);
    EXPECT_EQ(s.gamma.token == 1, s.increment == Z(-1));
  }
}

TEST(ExtendedChainTest, CoupledDiscreteIsRejected) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto aux = AuxSpace::discrete({Q(1), Q(2)}, {Q(1, 2), Q(1, 2)});
  EXPECT_THROW(sample_extended(mu, aux, 3, SeededStream{}, true), InvalidArgument);
}

TEST(FirstCoordinateTest, CyclicExample) {
  // Z_2 with mu = delta_1 and T in {1, 2} equally likely.
  const auto mu = Shift(cyclic_element(2, 1));
  const auto aux = AuxSpace::discrete({Q(1), Q(2)}, {Q(1, 2), Q(1, 2)});
  const auto r = project_transform(mu, aux, aux_first_coordinate_rule(aux), {});
  FiniteMeasure want(mu.group(), kExact);
  want.add(cyclic_element(2, 0), Q(1, 2));
  want.add(cyclic_element(2, 1), Q(1, 2));
  EXPECT_EQ(r.measure, want);
  EXPECT_EQ(r.mass_deficit, Q(0));
}

TEST(FirstCoordinateTest, ConvexCombinationOfPowers) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto aux = AuxSpace::discrete({Q(1), Q(3)}, {Q(1, 4), Q(3, 4)});
  const auto r = project_transform(mu, aux, aux_first_coordinate_rule(aux), {});
  const auto want = convex_combine(
      {{Q(1, 4), mu}, {Q(3, 4), convolution_power(mu, 3)}});
  EXPECT_EQ(r.measure, want);
  const auto ref = enumerate_stops(DiscreteSteps(mu, {Q(1, 4), Q(3, 4)}),
                                   testing::ref_first_coordinate({1, 3}), 3);
  EXPECT_EQ(table_tv(table_of(r.measure), ref.stopped), Q(0));
}

TEST(FirstCoordinateTest, RejectsNonIntegerPoints) {
  EXPECT_THROW(aux_first_coordinate_rule(
                   AuxSpace::discrete({Q(1, 2), Q(1)}, {Q(1, 2), Q(1, 2)})),
               InvalidArgument);
  EXPECT_THROW(aux_first_coordinate_rule(
                   AuxSpace::discrete({Q(0), Q(1)}, {Q(1, 2), Q(1, 2)})),
               InvalidArgument);
}

TEST(BetaFlagTest, CyclicExample) {
  // Z_2, mu = delta_1, half of the mass flagged: T is geometric(1/2), so
  // odd times carry 2/3.
  const auto mu = Shift(cyclic_element(2, 1));
  const auto split = split_by_fraction(mu, {{cyclic_element(2, 1), Q(1, 2)}});
  const auto aux = AuxSpace::unit_interval(mu, split);
  ProjectionOptions opts;
  opts.epsilon = Scalar::power_of_two(kExact, -30);
  const auto r = project_transform(mu, aux, beta_flag_rule(aux), opts);
  EXPECT_NEAR(r.measure.weight(cyclic_element(2, 1)).to_double(), 2.0 / 3, 1e-9);
  EXPECT_NEAR(r.measure.weight(cyclic_element(2, 0)).to_double(), 1.0 / 3, 1e-9);
}

TEST(BetaFlagTest, SupportSplitIsFirstIncrement) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto split = split_by_support(mu, {Z(-1)});
  const auto aux = AuxSpace::unit_interval(mu, split);
  const auto r = project_transform(mu, aux, beta_flag_rule(aux), {});
  for (long k = -1; k <= 17; ++k) {
    EXPECT_EQ(r.measure.weight(Z(k)), Q(1, 1L << (k + 2))) << k;
  }
  // Neumann series alpha^n beta is the same law.
  const auto series = neumann_series(split.alpha, split.beta,
                                     Scalar::power_of_two(kExact, -20), 1000);
  EXPECT_EQ(table_tv(table_of(r.measure), table_of(series)), Q(0));
}

TEST(BetaFlagTest, MatchesEnumerationOnFreeGroup) {
  const auto mu = simple_walk(GroupSpec::free(2));
  const auto split = split_by_fraction(
      mu, {{free_element(2, {1}), Q(1, 2)}, {free_element(2, {-2}), Q(1)}});
  const auto aux = AuxSpace::unit_interval(mu, split);
  ProjectionOptions opts;
  opts.epsilon = Scalar::power_of_two(kExact, -400);
  opts.max_horizon = 5;
  const auto r = project_transform(mu, aux, beta_flag_rule(aux), opts);
  const auto ref = enumerate_stops(SplitSteps(split), testing::ref_flag(), 5);
  EXPECT_EQ(table_tv(table_of(r.measure), ref.stopped), Q(0));
  EXPECT_EQ(r.mass_deficit, ref.unstopped);
}

TEST(BetaFlagTest, MonteCarloReadingsAgreeWithExact) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto split = split_by_fraction(mu, {{Z(1), Q(1, 2)}, {Z(-1), Q(1)}});
  const auto aux = AuxSpace::unit_interval(mu, split);
  const auto rule = beta_flag_rule(aux);
  ProjectionOptions exact_opts;
  exact_opts.epsilon = Scalar::power_of_two(kExact, -30);
  const auto exact = project_transform(mu, aux, rule, exact_opts);
  for (bool coupled : {false, true}) {
    ProjectionOptions opts;
    opts.engine = Engine::kMonteCarlo;
    opts.coupled = coupled;
    opts.monte_carlo.samples = 200000;
    opts.monte_carlo.stream = SeededStream{21, coupled ? 1u : 0u};
    const auto mc = project_transform(mu, aux, rule, opts);
    EXPECT_LT(total_variation(mc.measure, exact.measure).to_double(), 1e-2)
        << coupled;
  }
}

TEST(BetaFlagTest, EmptyBetaIsDegenerate) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  SplitPair s{mu, FiniteMeasure(mu.group(), kExact)};
  EXPECT_THROW(beta_flag_rule(AuxSpace::unit_interval(mu, s)), DegenerateSplit);
}

TEST(ProjectTransformTest, RejectsMismatchedSpaces) {
  const auto mu = simple_walk(GroupSpec::lattice(1));
  const auto a = AuxSpace::discrete({Q(1), Q(2)}, {Q(1, 2), Q(1, 2)});
  const auto b = AuxSpace::discrete({Q(1), Q(3)}, {Q(1, 2), Q(1, 2)});
  EXPECT_THROW(project_transform(mu, a, aux_first_coordinate_rule(b), {}),
               InvalidArgument);
  const auto other = simple_walk(GroupSpec::lattice(2));
  const auto split = split_by_support(other, {lattice_element({1, 0})});
  const auto interval = AuxSpace::unit_interval(other, split);
  EXPECT_THROW(project_transform(mu, interval, beta_flag_rule(interval), {}),
               InvalidArgument);
}

}  // namespace
}  // namespace boundary_walk
