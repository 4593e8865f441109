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

// Compact textual syntax for group elements and weights.
//
//   Z^k          "3,-1"                 comma-separated coordinates
//   Z_m          "3"                    residue (any integer, reduced mod m)
//   F_k          "ab^-1a" or "aBa"      letters a..z; "^-1" or upper case
//                                       inverts; "1" or "" is the identity
//   lamplighter  "p=2;L=0,1"            position, then lit sites; for k > 1
//                "p=1,0;L=0,1|2,2"      sites are separated by '|'
//
// Weights are "num/den", integers, or decimals. In exact mode decimals are
// read as exact rationals (0.1 is 1/10).

#pragma once

#include <string>
#include <string_view>

#include "boundary_walk/group.hpp"
#include "boundary_walk/scalar.hpp"

namespace boundary_walk {

std::string format_element(const GroupElement& g);

// Throws ParseError with a 1-based column on malformed input.
GroupElement parse_element(const GroupSpec& spec, std::string_view text);

Scalar parse_scalar(Arithmetic mode, std::string_view text);

}  // namespace boundary_walk
