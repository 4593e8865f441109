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
#include <vector>

#include "boundary_walk/group.hpp"
#include "boundary_walk/measure.hpp"
#include "boundary_walk/rng.hpp"

namespace boundary_walk {

// Finite path prefix: increments h_1..h_n and positions x_1..x_n with
// x_i = x_{i-1} h_i and x_0 = origin (the identity for walks started at e).
class PathPrefix {
 public:
  explicit PathPrefix(GroupElement origin);
  PathPrefix(GroupElement origin, const std::vector<GroupElement>& increments);

  void push_back(const GroupElement& increment);

  std::size_t length() const { return increments_.size(); }
  bool empty() const { return increments_.empty(); }
  const GroupElement& origin() const { return origin_; }
  // Position after all increments (the origin for an empty prefix).
  const GroupElement& end_position() const {
    return positions_.empty() ? origin_ : positions_.back();
  }
  const std::vector<GroupElement>& increments() const { return increments_; }
  const std::vector<GroupElement>& positions() const { return positions_; }
  // x_i for 0 <= i <= length(), with x_0 the origin.
  const GroupElement& position(std::size_t i) const {
    return i == 0 ? origin_ : positions_[i - 1];
  }

  // Recomputes positions from increments and compares.
  bool consistent() const;

  friend bool operator==(const PathPrefix&, const PathPrefix&) = default;

 private:
  GroupElement origin_;
  std::vector<GroupElement> increments_;
  std::vector<GroupElement> positions_;
};

// Inverse-CDF sampler over the canonically ordered support of a probability
// measure. The cumulative table is built once; each draw is a binary search.
class IncrementSampler {
 public:
  explicit IncrementSampler(const FiniteMeasure& mu);

  const GroupElement& draw(CounterRng& rng) const;
  // Index into support() of a draw.
  std::size_t draw_index(CounterRng& rng) const;
  const std::vector<GroupElement>& support() const { return support_; }

 private:
  std::vector<GroupElement> support_;
  std::vector<double> cumulative_;
};

// Unbounded path generator: increments are produced on demand, so stopping
// rules can run without a fixed horizon.
class PathGenerator {
 public:
  PathGenerator(const IncrementSampler& sampler, SeededStream stream);

  const GroupElement& next_increment();
  const GroupElement& position() const { return position_; }
  std::size_t steps() const { return steps_; }

 private:
  const IncrementSampler* sampler_;
  CounterRng rng_;
  GroupElement position_;
  std::size_t steps_ = 0;
};

// Increments i.i.d. with law mu, started at e. Deterministic given stream.
// Throws InvalidArgument for a non-probability measure.
PathPrefix sample_prefix(const FiniteMeasure& mu, std::size_t length,
                         SeededStream stream);

// U^k: drops the first k increments and re-bases at the identity, so the
// positions become x_k^-1 x_{k+j}.
PathPrefix increment_shift(const PathPrefix& path, std::size_t k);

// S^k: drops the first k positions and keeps the remaining ones with their
// original group values (origin becomes x_k).
PathPrefix left_shift(const PathPrefix& path, std::size_t k);

}  // namespace boundary_walk
