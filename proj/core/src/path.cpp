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

#include "boundary_walk/path.hpp"

#include <algorithm>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

PathPrefix::PathPrefix(GroupElement origin) : origin_(std::move(origin)) {}

PathPrefix::PathPrefix(GroupElement origin,
                       const std::vector<GroupElement>& increments)
    : origin_(std::move(origin)) {
  increments_.reserve(increments.size());
  positions_.reserve(increments.size());
  for (const auto& h : increments) push_back(h);
}

void PathPrefix::push_back(const GroupElement& increment) {
  positions_.push_back(end_position() * increment);
  increments_.push_back(increment);
}

bool PathPrefix::consistent() const {
  GroupElement x = origin_;
  if (positions_.size() != increments_.size()) return false;
  for (std::size_t i = 0; i < increments_.size(); ++i) {
    x = x * increments_[i];
    if (x != positions_[i]) return false;
  }
  return true;
}

IncrementSampler::IncrementSampler(const FiniteMeasure& mu) {
  if (!mu.is_probability()) {
    throw InvalidArgument("sampling needs a probability measure");
  }
  // Accumulate exactly when possible so the table ends at exactly 1.
  Scalar running = Scalar::zero(mu.arithmetic());
  for (const auto& [g, w] : mu) {
    running += w;
    support_.push_back(g);
    cumulative_.push_back(running.to_double());
  }
  cumulative_.back() = 1.0;
}

std::size_t IncrementSampler::draw_index(CounterRng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()),
                  support_.size() - 1);
}

const GroupElement& IncrementSampler::draw(CounterRng& rng) const {
  return support_[draw_index(rng)];
}

PathGenerator::PathGenerator(const IncrementSampler& sampler,
                             SeededStream stream)
    : sampler_(&sampler),
      rng_(stream),
      position_(identity(sampler.support().front().group())) {}

const GroupElement& PathGenerator::next_increment() {
  const GroupElement& h = sampler_->draw(rng_);
  position_ = position_ * h;
  ++steps_;
  return h;
}

PathPrefix sample_prefix(const FiniteMeasure& mu, std::size_t length,
                         SeededStream stream) {
  const IncrementSampler sampler(mu);
  CounterRng rng(stream);
  PathPrefix path(identity(mu.group()));
  for (std::size_t i = 0; i < length; ++i) path.push_back(sampler.draw(rng));
  return path;
}

PathPrefix increment_shift(const PathPrefix& path, std::size_t k) {
  if (k > path.length()) {
    throw InvalidArgument("shift beyond the end of the path");
  }
  const auto& h = path.increments();
  return PathPrefix(identity(path.origin().group()),
                    std::vector<GroupElement>(h.begin() + k, h.end()));
}

PathPrefix left_shift(const PathPrefix& path, std::size_t k) {
  if (k > path.length()) {
    throw InvalidArgument("shift beyond the end of the path");
  }
  const auto& h = path.increments();
  return PathPrefix(path.position(k),
                    std::vector<GroupElement>(h.begin() + k, h.end()));
}

}  // namespace boundary_walk
