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

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace boundary_walk {

enum class Arithmetic { kExact, kFloat };

std::string_view to_string(Arithmetic mode);

// A weight in one of the two arithmetic modes. Exact scalars are GMP
// rationals; float scalars are IEEE doubles. Binary operations between the
// two modes throw ArithmeticMismatch.
class Scalar {
 public:
  // Exact zero.
  Scalar() : value_(mpq_class(0)) {}
  explicit Scalar(mpq_class value);
  explicit Scalar(double value) : value_(value) {}

  static Scalar zero(Arithmetic mode);
  static Scalar one(Arithmetic mode);
  static Scalar integer(Arithmetic mode, long value);
  // num/den in the given mode; den must be nonzero.
  static Scalar ratio(Arithmetic mode, long num, long den);
  // In exact mode the double is converted without rounding.
  static Scalar from_double(Arithmetic mode, double value);
  // 2^exponent, exact in both modes for moderate exponents.
  static Scalar power_of_two(Arithmetic mode, int exponent);

  Arithmetic mode() const {
    return std::holds_alternative<mpq_class>(value_) ? Arithmetic::kExact
                                                     : Arithmetic::kFloat;
  }
  bool is_exact() const { return mode() == Arithmetic::kExact; }

  bool is_zero() const;
  int sign() const;
  double to_double() const;
  // Throws ArithmeticMismatch for float scalars.
  const mpq_class& rational() const;

  // Same value converted to `mode` (exact conversion of doubles).
  Scalar in_mode(Arithmetic mode) const;

  Scalar abs() const;
  Scalar pow(unsigned exponent) const;

  // "num/den" (or "num" for integers) in exact mode; shortest round-trip
  // decimal in float mode.
  std::string to_string() const;
  // Shortest round-trip decimal of to_double().
  std::string to_decimal() const;

  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  // Three-way comparison; throws on mode mismatch.
  friend int compare(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const Scalar& a, const Scalar& b) {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const Scalar& a, const Scalar& b) {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const Scalar& a, const Scalar& b) {
    return compare(a, b) >= 0;
  }

 private:
  std::variant<mpq_class, double> value_;
};

// Shortest decimal that round-trips through strtod.
std::string format_double(double value);

}  // namespace boundary_walk
