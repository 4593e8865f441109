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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace boundary_walk {

// The four concrete countable groups the library works with.
enum class GroupKind {
  kLattice,      // Z^k
  kCyclic,       // Z_m
  kFree,         // F_k
  kLamplighter,  // Z^k wreath Z_2
};

// Identifies one group. `rank` is k for lattices, free groups and
// lamplighters; `modulus` is m for cyclic groups. Unused fields are zero.
struct GroupSpec {
  GroupKind kind = GroupKind::kLattice;
  int rank = 0;
  std::int64_t modulus = 0;

  static GroupSpec lattice(int k);
  static GroupSpec cyclic(std::int64_t m);
  static GroupSpec free(int k);
  static GroupSpec lamplighter(int k);

  // Human-readable name such as "Z^2", "Z_5", "F_2", "L(Z^1)".
  std::string name() const;

  friend auto operator<=>(const GroupSpec&, const GroupSpec&) = default;
};

struct IntVector {
  std::vector<std::int64_t> coords;
  friend auto operator<=>(const IntVector&, const IntVector&) = default;
};

struct CyclicResidue {
  std::int64_t value = 0;
  friend auto operator<=>(const CyclicResidue&, const CyclicResidue&) = default;
};

// Letter +i is the i-th generator (1-based), -i its inverse.
struct ReducedWord {
  std::vector<int> letters;
  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;
};

// Lamplighter element: walker position plus the sorted set of lit sites.
// Lamp values live in Z_2, so a site is either lit (present) or absent.
struct LampState {
  std::vector<std::int64_t> position;
  std::vector<std::vector<std::int64_t>> lamps;
  friend auto operator<=>(const LampState&, const LampState&) = default;
};

using Payload = std::variant<IntVector, CyclicResidue, ReducedWord, LampState>;

// Brings a payload to canonical form for `spec`: residues reduced mod m,
// words freely reduced, lamps sorted with duplicates cancelled in pairs.
// Throws InvalidArgument if the payload does not match the group shape.
Payload canonicalize(const GroupSpec& spec, Payload payload);

// Immutable group element in canonical form. Equality is structural; the
// total order (group first, then payload lexicographically) exists to make
// measure supports and output tables deterministic.
class GroupElement {
 public:
  GroupElement(GroupSpec spec, Payload payload);

  const GroupSpec& group() const { return spec_; }
  const Payload& payload() const { return payload_; }

  const IntVector& as_vector() const { return std::get<IntVector>(payload_); }
  const CyclicResidue& as_residue() const {
    return std::get<CyclicResidue>(payload_);
  }
  const ReducedWord& as_word() const { return std::get<ReducedWord>(payload_); }
  const LampState& as_lamps() const { return std::get<LampState>(payload_); }

  bool is_identity() const;
  std::size_t hash() const;

  friend std::strong_ordering operator<=>(const GroupElement& a,
                                          const GroupElement& b) {
    if (auto c = a.spec_ <=> b.spec_; c != 0) return c;
    return a.payload_ <=> b.payload_;
  }
  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.spec_ == b.spec_ && a.payload_ == b.payload_;
  }

 private:
  GroupSpec spec_;
  Payload payload_;
};

GroupElement identity(const GroupSpec& spec);

// Throws GroupMismatch if a and b belong to different groups.
GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return multiply(a, b);
}

// Convenience constructors.
GroupElement lattice_element(std::vector<std::int64_t> coords);
GroupElement cyclic_element(std::int64_t m, std::int64_t value);
// Letters as above; the result is reduced.
GroupElement free_element(int rank, std::vector<int> letters);
GroupElement lamplighter_element(std::vector<std::int64_t> position,
                                 std::vector<std::vector<std::int64_t>> lamps);

// Symmetric standard generating set: unit vectors and their negatives for
// Z^k, {1, m-1} for Z_m, letters and inverses for F_k, unit moves plus the
// lamp toggle at the origin for the lamplighter.
std::vector<GroupElement> standard_generators(const GroupSpec& spec);

// Ball of the given radius in the word metric of standard_generators, in
// canonical order.
std::vector<GroupElement> word_ball(const GroupSpec& spec, int radius);

// Word length of a free-group element (number of letters).
std::size_t word_length(const GroupElement& a);

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

}  // namespace boundary_walk
