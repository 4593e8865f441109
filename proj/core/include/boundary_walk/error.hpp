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
#include <stdexcept>
#include <string>

namespace boundary_walk {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands live in different groups (or different group parameters).
class GroupMismatch : public Error {
 public:
  using Error::Error;
};

// Exact and floating scalars were mixed in one operation.
class ArithmeticMismatch : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A split produced an empty or full part, so one side would have mass 0.
class DegenerateSplit : public Error {
 public:
  using Error::Error;
};

// A series or iteration could not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed textual input. `column` is 1-based within the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}

  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

}  // namespace boundary_walk
