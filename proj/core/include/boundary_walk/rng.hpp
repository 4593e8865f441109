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

#include <array>
#include <cstdint>

namespace boundary_walk {

// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection of
// 128-bit counters. Every draw is a pure function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// SplitMix64 finalizer, used to derive substream identifiers.
std::uint64_t mix64(std::uint64_t x);

// A (seed, stream) pair. Identical pairs reproduce identical draws; distinct
// streams are independent lanes of the same keyed generator.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Child lane for work item `index` (sample, worker, check, ...).
  SeededStream substream(std::uint64_t index) const {
    return {seed, mix64(stream ^ mix64(index + 0x632be59bd9b4e019ULL))};
  }

  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

// Sequential reader over one stream: draw i is philox(key = seed,
// counter = (i, stream)). Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(SeededStream stream) : stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53 bits.
  double uniform();
  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t draws() const { return counter_; }
  const SeededStream& stream() const { return stream_; }

 private:
  SeededStream stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace boundary_walk
