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

#include "boundary_walk/verification.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "boundary_walk/error.hpp"
#include "boundary_walk/extended.hpp"
#include "boundary_walk/text.hpp"

namespace boundary_walk {

namespace {

// FNV-1a over the letters, so substreams do not depend on std::hash.
std::uint64_t word_key(const std::vector<int>& letters) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int x : letters) {
    h ^= static_cast<std::uint32_t>(x);
    h *= 0x100000001b3ULL;
  }
  return h ^ letters.size();
}

class CylinderEstimator {
 public:
  CylinderEstimator(GroupSpec group, std::vector<int> prefix,
                    std::size_t ray_samples, std::size_t ray_length,
                    SeededStream stream)
      : group_(group),
        prefix_(std::move(prefix)),
        ray_samples_(ray_samples),
        ray_length_(ray_length),
        stream_(stream) {}

  HarmonicValue operator()(const GroupElement& g) {
    if (g.group() != group_) throw GroupMismatch("cylinder function group");
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(g); it != cache_.end()) return it->second;
    }
    const HarmonicValue v = estimate(g.as_word().letters);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(g, v);
    return v;
  }

 private:
  HarmonicValue estimate(const std::vector<int>& start) const {
    const int moves = 2 * group_.rank;
    const bool power_of_two = (moves & (moves - 1)) == 0;
    int bits = 0;
    while ((1 << bits) < moves) ++bits;

    CounterRng rng(stream_.substream(word_key(start)));
    std::vector<int> word;
    word.reserve(start.size() + ray_length_);
    std::uint64_t hits = 0;
    for (std::size_t ray = 0; ray < ray_samples_; ++ray) {
      word.assign(start.begin(), start.end());
      std::uint64_t pool = 0;
      int left = 0;
      for (std::size_t step = 0; step < ray_length_; ++step) {
        int move;
        if (power_of_two) {
          if (left < bits) {
            pool = rng.next_u64();
            left = 64;
          }
          move = static_cast<int>(pool & static_cast<std::uint64_t>(moves - 1));
          pool >>= bits;
          left -= bits;
        } else {
          move = static_cast<int>(rng.below(static_cast<std::uint64_t>(moves)));
        }
        const int letter = (move / 2 + 1) * (move % 2 == 0 ? 1 : -1);
        if (!word.empty() && word.back() == -letter) {
          word.pop_back();
        } else {
          word.push_back(letter);
        }
      }
      if (word.size() >= prefix_.size() &&
          std::equal(prefix_.begin(), prefix_.end(), word.begin())) {
        ++hits;
      }
    }
    const double n = static_cast<double>(ray_samples_);
    const double p = static_cast<double>(hits) / n;
    // Shrunk variance keeps the error positive at p = 0 or 1.
    const double q = (static_cast<double>(hits) + 1) / (n + 2);
    return {p, std::sqrt(q * (1 - q) / n), start.size() < ray_length_};
  }

  GroupSpec group_;
  std::vector<int> prefix_;
  std::size_t ray_samples_;
  std::size_t ray_length_;
  SeededStream stream_;
  std::mutex mu_;
  std::map<GroupElement, HarmonicValue> cache_;
};

struct MeanEstimate {
  double mean = 0;
  double variance = 0;  // of the mean, from the values' own errors
  bool stable = true;
};

// sum_h f(g h) w(h), with the variance contributed by estimated values.
MeanEstimate integrate(const HarmonicFunction& f, const GroupElement& g,
                       const FiniteMeasure& m) {
  MeanEstimate out;
  for (const auto& [h, w] : m) {
    const HarmonicValue v = f(g * h);
    const double wd = w.to_double();
    out.mean += wd * v.value;
    out.variance += wd * wd * v.std_error * v.std_error;
    out.stable = out.stable && v.stable;
  }
  return out;
}

bool neighbourhood_faithful(const HarmonicFunction& f, const GroupElement& g,
                            const FiniteMeasure& m) {
  if (!f.faithful(g)) return false;
  for (const auto& [h, w] : m) {
    if (!f.faithful(g * h)) return false;
  }
  return true;
}

struct ResidualScan {
  std::size_t points = 0;
  double residual = 0;
  double max_error = 0;  // largest combined standard error
  bool stable = true;
};

void scan(const HarmonicFunction& f, const GroupElement& g,
          const FiniteMeasure& m, ResidualScan& out) {
  const HarmonicValue at = f(g);
  const MeanEstimate avg = integrate(f, g, m);
  out.residual = std::max(out.residual, std::abs(at.value - avg.mean));
  out.max_error = std::max(
      out.max_error, std::sqrt(at.std_error * at.std_error + avg.variance));
  out.stable = out.stable && at.stable && avg.stable;
}

CheckStatus verdict(double residual, double tolerance) {
  return residual <= tolerance ? CheckStatus::kPass : CheckStatus::kFail;
}

double tv_double(const FiniteMeasure& a, const FiniteMeasure& b) {
  return total_variation(a, b).to_double();
}

// ----- built-in experiments used by the bundles -----

constexpr Arithmetic kExact = Arithmetic::kExact;

Scalar q(long num, long den) { return Scalar::ratio(kExact, num, den); }

FiniteMeasure simple_walk(const GroupSpec& group) {
  return FiniteMeasure::uniform(standard_generators(group), kExact);
}

// p delta_1 + (1 - p) delta_-1 with p = 2/3, so r = q/p = 1/2.
FiniteMeasure biased_walk() {
  return FiniteMeasure::from_weights(
      GroupSpec::lattice(1), kExact,
      {{lattice_element({1}), q(2, 3)}, {lattice_element({-1}), q(1, 3)}});
}

std::set<GroupElement> letters(int rank, std::initializer_list<int> ls) {
  std::set<GroupElement> out;
  for (int l : ls) out.insert(free_element(rank, {l}));
  return out;
}

CheckReport identity_report(std::string name, double residual,
                            double tolerance, std::size_t points,
                            std::string detail = {}) {
  CheckReport r;
  r.name = std::move(name);
  r.points = points;
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = verdict(residual, tolerance);
  r.detail = std::move(detail);
  return r;
}

std::vector<std::pair<std::string, FiniteMeasure>> reference_walks() {
  return {
      {"Z_2", FiniteMeasure::dirac(cyclic_element(2, 1), kExact)},
      {"Z", simple_walk(GroupSpec::lattice(1))},
      {"F_2", simple_walk(GroupSpec::free(2))},
      {"L(Z)", simple_walk(GroupSpec::lamplighter(1))},
  };
}

std::vector<CheckReport> identities_bundle() {
  std::vector<CheckReport> out;
  const Scalar eps = default_epsilon(kExact);

  for (const auto& [name, mu] : reference_walks()) {
    double worst = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto t = exact_transform(mu, constant_rule(n), eps);
      worst = std::max(worst, tv_double(t.measure, convolution_power(mu, n)));
    }
    out.push_back(identity_report("constant-time/" + name, worst, 0, 5));
  }

  {
    const FiniteMeasure mu = simple_walk(GroupSpec::lattice(1));
    const auto t1 = constant_rule(2);
    const auto t2 = first_increment_rule({lattice_element({-1})});
    const auto both = exact_transform(mu, sequential_compose(t1, t2), eps);
    const auto m1 = exact_transform(mu, t1, eps).measure;
    const auto m2 = exact_transform(mu, t2, eps).measure;
    out.push_back(identity_report(
        "composition/Z", tv_double(both.measure, convolve(m1, m2)),
        2 * eps.to_double(), both.measure.support_size()));
  }

  {
    const FiniteMeasure mu = simple_walk(GroupSpec::lattice(1));
    const std::set<GroupElement> b{lattice_element({-1})};
    const auto t = exact_transform(mu, first_increment_rule(b), eps);
    const SplitPair split = split_by_support(mu, b);
    const auto series = neumann_series(split.alpha, split.beta, eps, 10000);
    out.push_back(identity_report("geometric-series/Z",
                                  tv_double(t.measure, series),
                                  2 * eps.to_double(),
                                  t.measure.support_size()));
  }

  for (const auto& [name, mu] : reference_walks()) {
    const AuxSpace aux = AuxSpace::discrete(
        {Scalar::integer(kExact, 1), Scalar::integer(kExact, 2),
         Scalar::integer(kExact, 3)},
        {q(1, 2), q(1, 4), q(1, 4)});
    const auto t = project_transform(mu, aux, aux_first_coordinate_rule(aux),
                                     ProjectionOptions{});
    const auto oracle = convex_combine({{q(1, 2), convolution_power(mu, 1)},
                                        {q(1, 4), convolution_power(mu, 2)},
                                        {q(1, 4), convolution_power(mu, 3)}});
    out.push_back(identity_report("convex-combination/" + name,
                                  tv_double(t.measure, oracle), 0,
                                  t.measure.support_size()));
  }

  {
    const GroupSpec z2 = GroupSpec::cyclic(2);
    const FiniteMeasure mu = FiniteMeasure::dirac(cyclic_element(2, 1), kExact);
    const SplitPair split =
        split_by_fraction(mu, {{cyclic_element(2, 1), q(1, 2)}});
    const AuxSpace aux = AuxSpace::unit_interval(mu, split);
    const auto t =
        project_transform(mu, aux, beta_flag_rule(aux), ProjectionOptions{});
    const auto oracle = FiniteMeasure::from_weights(
        z2, kExact,
        {{cyclic_element(2, 1), q(2, 3)}, {cyclic_element(2, 0), q(1, 3)}});
    out.push_back(identity_report("overlapping-split/Z_2",
                                  tv_double(t.measure, oracle),
                                  eps.to_double(), 2));
  }

  {
    const GroupSpec z = GroupSpec::lattice(1);
    const FiniteMeasure mu = FiniteMeasure::from_weights(
        z, kExact,
        {{lattice_element({-2}), q(1, 10)},
         {lattice_element({-1}), q(1, 5)},
         {lattice_element({0}), q(2, 5)},
         {lattice_element({1}), q(1, 5)},
         {lattice_element({2}), q(1, 10)}});
    std::map<GroupElement, Scalar> ref;
    for (const auto& [g, w] : mu) ref.emplace(g, Scalar::one(kExact));
    const SplitPair split = threshold_split(mu, ref, q(3, 20));
    double gap = 0;
    for (const auto& [g, w] : mu) {
      gap = std::max(gap, (split.alpha.weight(g) + split.beta.weight(g) - w)
                              .abs()
                              .to_double());
    }
    const auto series = neumann_series(split.alpha, split.beta, eps, 10000);
    const double deficit = (Scalar::one(kExact) - series.mass()).to_double();
    out.push_back(identity_report(
        "threshold-split/Z", std::max(gap, deficit), eps.to_double(), 5,
        "max of |alpha + beta - mu| and the Neumann mass deficit"));
  }
  return out;
}

struct HarmonicCase {
  std::string name;
  HarmonicFunction f;
  FiniteMeasure mu;
  std::vector<std::pair<std::string, StoppingRule>> rules;
};

std::vector<HarmonicCase> harmonic_cases(const BundleOptions& options) {
  const GroupSpec f2 = GroupSpec::free(2);
  std::vector<HarmonicCase> cases;
  cases.push_back({"constant/Z",
                   constant_harmonic(1.5),
                   simple_walk(GroupSpec::lattice(1)),
                   {{"constant(2)", constant_rule(2)},
                    {"first_increment{-1}",
                     first_increment_rule({lattice_element({-1})})}}});
  cases.push_back({"exponential/Z",
                   clipped_exponential_harmonic(0.5, -8, 64),
                   biased_walk(),
                   {{"constant(2)", constant_rule(2)},
                    {"first_increment{-1}",
                     first_increment_rule({lattice_element({-1})})}}});
  cases.push_back(
      {"cylinder(a)/F_2",
       cylinder_harmonic(f2, {1}, options.ray_samples, 32,
                         SeededStream{options.seed, 0xc7}),
       simple_walk(f2),
       {{"constant(2)", constant_rule(2)},
        {"first_increment{b,B}", first_increment_rule(letters(2, {2, -2}))}}});
  return cases;
}

std::vector<CheckReport> doob_bundle(const BundleOptions& options) {
  std::vector<CheckReport> out;
  std::uint64_t index = 0;
  for (const auto& c : harmonic_cases(options)) {
    for (const auto& [rule_name, rule] : c.rules) {
      CheckReport r =
          doob_check(c.f, c.mu, rule, options.samples,
                     SeededStream{options.seed, 0}.substream(index++),
                     options.workers);
      r.name = "doob/" + c.name + "/" + rule_name;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckReport> transfer_bundle(const BundleOptions& options) {
  std::vector<CheckReport> out;
  const Scalar eps = default_epsilon(kExact);
  for (const auto& c : harmonic_cases(options)) {
    const auto points = word_ball(c.mu.group(), 2);
    CheckReport h = harmonicity_residual(c.f, c.mu, points);
    h.name = "harmonicity/" + c.name;
    out.push_back(std::move(h));
    for (const auto& [rule_name, rule] : c.rules) {
      CheckReport r = transfer_check(c.f, c.mu, rule, points, eps);
      r.name = "transfer/" + c.name + "/" + rule_name;
      out.push_back(std::move(r));
    }
  }
  // Overlapping split on F_2: every b-step stops, a-steps stop half the time.
  const GroupSpec f2 = GroupSpec::free(2);
  const FiniteMeasure mu = simple_walk(f2);
  std::map<GroupElement, Scalar> fraction;
  for (const auto& g : letters(2, {1, -1})) fraction.emplace(g, q(1, 2));
  for (const auto& g : letters(2, {2, -2})) fraction.emplace(g, q(1, 1));
  const AuxSpace aux = AuxSpace::unit_interval(mu, split_by_fraction(mu, fraction));
  const auto projected =
      project_transform(mu, aux, beta_flag_rule(aux), ProjectionOptions{});
  const auto f = cylinder_harmonic(f2, {1}, options.ray_samples, 32,
                                   SeededStream{options.seed, 0xc7});
  CheckReport r = transfer_check(f, mu, projected, word_ball(f2, 1));
  r.name = "transfer/cylinder(a)/F_2/beta_flag";
  out.push_back(std::move(r));
  for (auto& report : out) {
    if (report.seeds.empty()) report.seeds.push_back(options.seed);
  }
  return out;
}

}  // namespace

HarmonicFunction::HarmonicFunction(std::string description, double bound_norm,
                                   Evaluator evaluate, Region faithful)
    : description_(std::move(description)),
      bound_norm_(bound_norm),
      evaluate_(std::move(evaluate)),
      faithful_(std::move(faithful)) {}

HarmonicFunction constant_harmonic(double c) {
  return HarmonicFunction("constant " + format_double(c), std::abs(c),
                          [c](const GroupElement&) { return HarmonicValue{c}; });
}

HarmonicFunction clipped_exponential_harmonic(double r, std::int64_t lower,
                                              std::int64_t upper) {
  if (!(r > 0)) throw InvalidArgument("ratio must be positive");
  if (lower > upper) throw InvalidArgument("empty clipping window");
  const GroupSpec z = GroupSpec::lattice(1);
  auto value = [=](const GroupElement& g) {
    if (g.group() != z) throw GroupMismatch("exponential harmonic lives on Z");
    const std::int64_t n = std::clamp(g.as_vector().coords[0], lower, upper);
    return HarmonicValue{std::pow(r, static_cast<double>(n))};
  };
  auto faithful = [=](const GroupElement& g) {
    const std::int64_t n = g.as_vector().coords[0];
    return n >= lower && n <= upper;
  };
  const double bound = std::max(std::pow(r, static_cast<double>(lower)),
                                std::pow(r, static_cast<double>(upper)));
  return HarmonicFunction("r^n clipped to [" + std::to_string(lower) + ", " +
                              std::to_string(upper) + "], r = " +
                              format_double(r),
                          bound, value, faithful);
}

HarmonicFunction cylinder_harmonic(const GroupSpec& group,
                                   const std::vector<int>& prefix,
                                   std::size_t ray_samples,
                                   std::size_t ray_length,
                                   SeededStream stream) {
  if (group.kind != GroupKind::kFree || group.rank < 2) {
    throw InvalidArgument("cylinder functions need a free group of rank >= 2");
  }
  const GroupElement word = free_element(group.rank, prefix);
  if (prefix.empty() || word.as_word().letters != prefix) {
    throw InvalidArgument("cylinder prefix must be a nonempty reduced word");
  }
  if (ray_samples == 0 || ray_length == 0) {
    throw InvalidArgument("cylinder estimate needs rays");
  }
  auto estimator = std::make_shared<CylinderEstimator>(
      group, prefix, ray_samples, ray_length, stream);
  HarmonicFunction f(
      "cylinder " + format_element(word) + " (" + std::to_string(ray_samples) +
          " rays of length " + std::to_string(ray_length) + ")",
      1.0, [estimator](const GroupElement& g) { return (*estimator)(g); });
  f.set_estimated(true);
  return f;
}

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

CheckReport harmonicity_residual(const HarmonicFunction& f,
                                 const FiniteMeasure& mu,
                                 const std::vector<GroupElement>& points) {
  if (points.empty()) throw InvalidArgument("no points to check");
  ResidualScan s;
  for (const auto& g : points) {
    if (!neighbourhood_faithful(f, g, mu)) continue;
    ++s.points;
    scan(f, g, mu, s);
  }
  CheckReport r;
  r.name = "harmonicity";
  r.points = s.points;
  r.residual = s.residual;
  r.tolerance = f.estimated() ? 4 * s.max_error : kExactCheckTolerance;
  r.status = verdict(r.residual, r.tolerance);
  r.detail = f.description();
  if (s.points == 0 || !s.stable) {
    r.status = CheckStatus::kInconclusive;
    r.detail += s.points == 0 ? "; no interior points" : "; unstable estimates";
  }
  return r;
}

CheckReport doob_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                       const StoppingRule& rule, std::size_t samples,
                       SeededStream stream, unsigned workers,
                       std::size_t horizon_cap) {
  MonteCarloOptions options;
  options.samples = samples;
  options.horizon_cap = horizon_cap;
  options.stream = stream;
  options.workers = workers;
  const IncrementStepSource source(mu);
  const StoppedCounts counts =
      sample_stopped_positions(mu.group(), source, rule, options);

  CheckReport r;
  r.name = "doob";
  r.points = counts.counts.size();
  r.seeds = {stream.seed};
  r.detail = f.description() + " under " + rule.describe();

  const HarmonicValue at_e = f(identity(mu.group()));
  const double stopped = static_cast<double>(counts.stopped);
  const double deficit =
      static_cast<double>(counts.samples - counts.stopped) /
      static_cast<double>(counts.samples);
  if (counts.stopped == 0) {
    r.residual = std::abs(at_e.value);
    r.tolerance = f.bound_norm();
    r.status = CheckStatus::kInconclusive;
    r.detail += "; no path stopped";
    return r;
  }

  std::vector<std::pair<double, HarmonicValue>> values;
  double mean = 0;
  bool stable = at_e.stable;
  for (const auto& [y, c] : counts.counts) {
    const HarmonicValue v = f(y);
    stable = stable && v.stable;
    values.push_back({static_cast<double>(c), v});
    mean += static_cast<double>(c) * v.value;
  }
  mean /= stopped;
  double spread = 0;
  double value_var = 0;
  for (const auto& [c, v] : values) {
    spread += c * (v.value - mean) * (v.value - mean);
    value_var += (c / stopped) * (c / stopped) * v.std_error * v.std_error;
  }
  const double sample_var = stopped > 1 ? spread / (stopped - 1) : 0;
  const double se = std::sqrt(sample_var / stopped + value_var +
                              at_e.std_error * at_e.std_error);

  r.residual = std::abs(mean - at_e.value);
  r.tolerance = 4 * se + deficit * f.bound_norm();
  r.status = verdict(r.residual, r.tolerance);
  if (samples < 100 || deficit > 1e-3 || !stable) {
    r.status = CheckStatus::kInconclusive;
    r.detail += samples < 100       ? "; too few samples"
                : deficit > 1e-3 ? "; too many paths did not stop"
                                 : "; unstable estimates";
  }
  return r;
}

CheckReport transfer_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                           const TransformResult& transformed,
                           const std::vector<GroupElement>& points) {
  if (points.empty()) throw InvalidArgument("no points to check");
  const FiniteMeasure& mu_t = transformed.measure;
  ResidualScan s;
  for (const auto& g : points) {
    if (!neighbourhood_faithful(f, g, mu) ||
        !neighbourhood_faithful(f, g, mu_t)) {
      continue;
    }
    ++s.points;
    scan(f, g, mu, s);
    scan(f, g, mu_t, s);
  }
  const double deficit = transformed.mass_deficit.to_double();
  CheckReport r;
  r.name = "transfer";
  r.points = s.points;
  r.residual = s.residual;
  r.tolerance = (f.estimated() ? 4 * s.max_error : kExactCheckTolerance) +
                deficit * f.bound_norm();
  r.status = verdict(r.residual, r.tolerance);
  r.detail = f.description();
  if (transformed.truncated) r.detail += "; transform truncated";
  if (s.points == 0 || !s.stable) {
    r.status = CheckStatus::kInconclusive;
    r.detail += s.points == 0 ? "; no interior points" : "; unstable estimates";
  }
  return r;
}

CheckReport transfer_check(const HarmonicFunction& f, const FiniteMeasure& mu,
                           const StoppingRule& rule,
                           const std::vector<GroupElement>& points,
                           const Scalar& epsilon, std::size_t max_horizon) {
  CheckReport r = transfer_check(f, mu, exact_transform(mu, rule, epsilon,
                                                        max_horizon),
                                 points);
  r.detail += " under " + rule.describe();
  return r;
}

std::vector<std::pair<std::size_t, double>> entropy_diagnostic(
    const FiniteMeasure& mu, std::size_t max_n, std::size_t support_cap) {
  if (!mu.is_probability()) {
    throw InvalidArgument("entropy needs a probability measure");
  }
  std::vector<std::pair<std::size_t, double>> out;
  FiniteMeasure power = mu;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (power.support_size() > support_cap) {
      throw InvalidArgument("support of mu^" + std::to_string(n) +
                            " exceeds the cap of " +
                            std::to_string(support_cap) + " atoms");
    }
    out.emplace_back(n, shannon_entropy(power));
    if (n < max_n) power = convolve(power, mu);
  }
  return out;
}

bool is_bundle(const std::string& name) {
  return name == "identities" || name == "doob" || name == "transfer" ||
         name == "all";
}

std::vector<CheckReport> run_bundle(const std::string& name,
                                    const BundleOptions& options) {
  if (!is_bundle(name)) throw InvalidArgument("unknown bundle '" + name + "'");
  std::vector<CheckReport> out;
  auto append = [&out](std::vector<CheckReport> part) {
    for (auto& r : part) out.push_back(std::move(r));
  };
  if (name == "identities" || name == "all") append(identities_bundle());
  if (name == "doob" || name == "all") append(doob_bundle(options));
  if (name == "transfer" || name == "all") append(transfer_bundle(options));
  return out;
}

}  // namespace boundary_walk
