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

#include "boundary_walk/group.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

namespace {

std::int64_t floor_mod(std::int64_t value, std::int64_t m) {
  const std::int64_t r = value % m;
  return r < 0 ? r + m : r;
}

void require_rank(const std::vector<std::int64_t>& v, int rank,
                  const char* what) {
  if (v.size() != static_cast<std::size_t>(rank)) {
    throw InvalidArgument(std::string(what) + " has wrong dimension");
  }
}

// Free reduction with a stack; appends `letters` onto `word`.
void append_reduced(std::vector<int>& word, const std::vector<int>& letters) {
  for (int letter : letters) {
    if (!word.empty() && word.back() == -letter) {
      word.pop_back();
    } else {
      word.push_back(letter);
    }
  }
}

// Z_2-valued lamp configurations add by symmetric difference.
std::vector<std::vector<std::int64_t>> lamp_sum(
    const std::vector<std::vector<std::int64_t>>& a,
    const std::vector<std::vector<std::int64_t>>& b) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out));
  return out;
}

std::vector<std::vector<std::int64_t>> lamp_shift(
    std::vector<std::vector<std::int64_t>> lamps,
    const std::vector<std::int64_t>& by) {
  for (auto& site : lamps) {
    for (std::size_t i = 0; i < site.size(); ++i) site[i] += by[i];
  }
  // Translation preserves lexicographic order.
  return lamps;
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

GroupSpec GroupSpec::lattice(int k) {
  if (k < 1) throw InvalidArgument("lattice rank must be positive");
  return {GroupKind::kLattice, k, 0};
}

GroupSpec GroupSpec::cyclic(std::int64_t m) {
  if (m < 1) throw InvalidArgument("cyclic modulus must be positive");
  return {GroupKind::kCyclic, 0, m};
}

GroupSpec GroupSpec::free(int k) {
  if (k < 1) throw InvalidArgument("free group rank must be positive");
  return {GroupKind::kFree, k, 0};
}

GroupSpec GroupSpec::lamplighter(int k) {
  if (k < 1) throw InvalidArgument("lamplighter rank must be positive");
  return {GroupKind::kLamplighter, k, 0};
}

std::string GroupSpec::name() const {
  switch (kind) {
    case GroupKind::kLattice:
      return "Z^" + std::to_string(rank);
    case GroupKind::kCyclic:
      return "Z_" + std::to_string(modulus);
    case GroupKind::kFree:
      return "F_" + std::to_string(rank);
    case GroupKind::kLamplighter:
      return "L(Z^" + std::to_string(rank) + ")";
  }
  return "?";
}

Payload canonicalize(const GroupSpec& spec, Payload payload) {
  switch (spec.kind) {
    case GroupKind::kLattice: {
      auto* v = std::get_if<IntVector>(&payload);
      if (v == nullptr) throw InvalidArgument("lattice element needs a vector");
      require_rank(v->coords, spec.rank, "lattice element");
      return payload;
    }
    case GroupKind::kCyclic: {
      auto* r = std::get_if<CyclicResidue>(&payload);
      if (r == nullptr) throw InvalidArgument("cyclic element needs a residue");
      r->value = floor_mod(r->value, spec.modulus);
      return payload;
    }
    case GroupKind::kFree: {
      auto* w = std::get_if<ReducedWord>(&payload);
      if (w == nullptr) throw InvalidArgument("free group element needs a word");
      for (int letter : w->letters) {
        if (letter == 0 || std::abs(letter) > spec.rank) {
          throw InvalidArgument("letter outside the free group alphabet");
        }
      }
      std::vector<int> reduced;
      reduced.reserve(w->letters.size());
      append_reduced(reduced, w->letters);
      w->letters = std::move(reduced);
      return payload;
    }
    case GroupKind::kLamplighter: {
      auto* s = std::get_if<LampState>(&payload);
      if (s == nullptr) throw InvalidArgument("lamplighter element needs lamps");
      require_rank(s->position, spec.rank, "lamplighter position");
      for (const auto& site : s->lamps) {
        require_rank(site, spec.rank, "lamp site");
      }
      std::sort(s->lamps.begin(), s->lamps.end());
      std::vector<std::vector<std::int64_t>> lit;
      lit.reserve(s->lamps.size());
      for (auto& site : s->lamps) {
        if (!lit.empty() && lit.back() == site) {
          lit.pop_back();
        } else {
          lit.push_back(std::move(site));
        }
      }
      s->lamps = std::move(lit);
      return payload;
    }
  }
  throw InvalidArgument("unknown group kind");
}

GroupElement::GroupElement(GroupSpec spec, Payload payload)
    : spec_(spec), payload_(canonicalize(spec, std::move(payload))) {}

bool GroupElement::is_identity() const { return *this == identity(spec_); }

std::size_t GroupElement::hash() const {
  std::size_t h = mix(static_cast<std::size_t>(spec_.kind),
                      static_cast<std::size_t>(spec_.rank));
  h = mix(h, static_cast<std::size_t>(spec_.modulus));
  std::visit(
      [&h](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          for (auto c : p.coords) h = mix(h, static_cast<std::size_t>(c));
        } else if constexpr (std::is_same_v<T, CyclicResidue>) {
          h = mix(h, static_cast<std::size_t>(p.value));
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          for (auto c : p.letters) h = mix(h, static_cast<std::size_t>(c));
        } else {
          for (auto c : p.position) h = mix(h, static_cast<std::size_t>(c));
          for (const auto& site : p.lamps) {
            for (auto c : site) h = mix(h, static_cast<std::size_t>(c));
          }
        }
      },
      payload_);
  return h;
}

GroupElement identity(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::kLattice:
      return {spec, IntVector{std::vector<std::int64_t>(spec.rank, 0)}};
    case GroupKind::kCyclic:
      return {spec, CyclicResidue{0}};
    case GroupKind::kFree:
      return {spec, ReducedWord{}};
    case GroupKind::kLamplighter:
      return {spec, LampState{std::vector<std::int64_t>(spec.rank, 0), {}}};
  }
  throw InvalidArgument("unknown group kind");
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (a.group() != b.group()) {
    throw GroupMismatch("cannot multiply elements of " + a.group().name() +
                        " and " + b.group().name());
  }
  const GroupSpec& spec = a.group();
  switch (spec.kind) {
    case GroupKind::kLattice: {
      auto coords = a.as_vector().coords;
      const auto& other = b.as_vector().coords;
      for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += other[i];
      return {spec, IntVector{std::move(coords)}};
    }
    case GroupKind::kCyclic:
      return {spec,
              CyclicResidue{floor_mod(a.as_residue().value + b.as_residue().value,
                                      spec.modulus)}};
    case GroupKind::kFree: {
      auto letters = a.as_word().letters;
      append_reduced(letters, b.as_word().letters);
      return {spec, ReducedWord{std::move(letters)}};
    }
    case GroupKind::kLamplighter: {
      // (s, f)(t, g) = (s + t, f + g translated by s)
      const LampState& x = a.as_lamps();
      const LampState& y = b.as_lamps();
      auto position = x.position;
      for (std::size_t i = 0; i < position.size(); ++i) {
        position[i] += y.position[i];
      }
      auto lamps = lamp_sum(x.lamps, lamp_shift(y.lamps, x.position));
      return {spec, LampState{std::move(position), std::move(lamps)}};
    }
  }
  throw InvalidArgument("unknown group kind");
}

GroupElement inverse(const GroupElement& a) {
  const GroupSpec& spec = a.group();
  switch (spec.kind) {
    case GroupKind::kLattice: {
      auto coords = a.as_vector().coords;
      for (auto& c : coords) c = -c;
      return {spec, IntVector{std::move(coords)}};
    }
    case GroupKind::kCyclic:
      return {spec, CyclicResidue{floor_mod(-a.as_residue().value, spec.modulus)}};
    case GroupKind::kFree: {
      const auto& letters = a.as_word().letters;
      std::vector<int> inv(letters.rbegin(), letters.rend());
      for (auto& letter : inv) letter = -letter;
      return {spec, ReducedWord{std::move(inv)}};
    }
    case GroupKind::kLamplighter: {
      // (s, f)^-1 = (-s, f translated by -s)
      const LampState& x = a.as_lamps();
      auto position = x.position;
      for (auto& c : position) c = -c;
      auto lamps = lamp_shift(x.lamps, position);
      return {spec, LampState{std::move(position), std::move(lamps)}};
    }
  }
  throw InvalidArgument("unknown group kind");
}

GroupElement lattice_element(std::vector<std::int64_t> coords) {
  const auto spec = GroupSpec::lattice(static_cast<int>(coords.size()));
  return {spec, IntVector{std::move(coords)}};
}

GroupElement cyclic_element(std::int64_t m, std::int64_t value) {
  return {GroupSpec::cyclic(m), CyclicResidue{value}};
}

GroupElement free_element(int rank, std::vector<int> letters) {
  return {GroupSpec::free(rank), ReducedWord{std::move(letters)}};
}

GroupElement lamplighter_element(
    std::vector<std::int64_t> position,
    std::vector<std::vector<std::int64_t>> lamps) {
  const auto spec = GroupSpec::lamplighter(static_cast<int>(position.size()));
  return {spec, LampState{std::move(position), std::move(lamps)}};
}

std::vector<GroupElement> standard_generators(const GroupSpec& spec) {
  std::vector<GroupElement> gens;
  switch (spec.kind) {
    case GroupKind::kLattice:
      for (int i = 0; i < spec.rank; ++i) {
        for (std::int64_t sign : {1, -1}) {
          std::vector<std::int64_t> v(spec.rank, 0);
          v[i] = sign;
          gens.emplace_back(spec, IntVector{std::move(v)});
        }
      }
      break;
    case GroupKind::kCyclic:
      gens.emplace_back(spec, CyclicResidue{1});
      gens.emplace_back(spec, CyclicResidue{-1});
      break;
    case GroupKind::kFree:
      for (int i = 1; i <= spec.rank; ++i) {
        gens.emplace_back(spec, ReducedWord{{i}});
        gens.emplace_back(spec, ReducedWord{{-i}});
      }
      break;
    case GroupKind::kLamplighter:
      for (int i = 0; i < spec.rank; ++i) {
        for (std::int64_t sign : {1, -1}) {
          std::vector<std::int64_t> v(spec.rank, 0);
          v[i] = sign;
          gens.emplace_back(spec, LampState{std::move(v), {}});
        }
      }
      gens.emplace_back(spec,
                        LampState{std::vector<std::int64_t>(spec.rank, 0),
                                  {std::vector<std::int64_t>(spec.rank, 0)}});
      break;
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

std::vector<GroupElement> word_ball(const GroupSpec& spec, int radius) {
  const auto gens = standard_generators(spec);
  std::set<GroupElement> seen{identity(spec)};
  std::vector<GroupElement> frontier{identity(spec)};
  for (int r = 0; r < radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens) {
        auto h = g * s;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::size_t word_length(const GroupElement& a) {
  return a.as_word().letters.size();
}

}  // namespace boundary_walk
