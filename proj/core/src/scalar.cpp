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

#include "boundary_walk/scalar.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

namespace {

// Round-to-nearest-even conversion. mpq_get_d truncates, which would make
// 66703/100000 print as 0.6670299999999999.
double nearest_double(const mpq_class& q) {
  const int s = sgn(q);
  if (s == 0) return 0.0;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  // Scale so the integer quotient has 54 or 55 bits.
  long shift = 54 - static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) +
               static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  if (shift > 0) {
    num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  mpz_class quo;
  mpz_class rem;
  mpz_fdiv_qr(quo.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
              den.get_mpz_t());
  const long extra =
      static_cast<long>(mpz_sizeinbase(quo.get_mpz_t(), 2)) - 53;
  const mpz_class mask = (mpz_class(1) << static_cast<mp_bitcnt_t>(extra)) - 1;
  const mpz_class low = quo & mask;
  const mpz_class half = mpz_class(1) << static_cast<mp_bitcnt_t>(extra - 1);
  quo >>= static_cast<mp_bitcnt_t>(extra);
  shift -= extra;
  if (low > half || (low == half && (rem != 0 || mpz_odd_p(quo.get_mpz_t())))) {
    ++quo;
  }
  return s * std::ldexp(quo.get_d(), static_cast<int>(-shift));
}

void require_same_mode(const Scalar& a, const Scalar& b) {
  if (a.mode() != b.mode()) {
    throw ArithmeticMismatch("cannot combine exact and float scalars");
  }
}

}  // namespace

std::string_view to_string(Arithmetic mode) {
  return mode == Arithmetic::kExact ? "exact" : "float";
}

Scalar::Scalar(mpq_class value) : value_(std::move(value)) {
  std::get<mpq_class>(value_).canonicalize();
}

Scalar Scalar::zero(Arithmetic mode) { return integer(mode, 0); }

Scalar Scalar::one(Arithmetic mode) { return integer(mode, 1); }

Scalar Scalar::integer(Arithmetic mode, long value) {
  if (mode == Arithmetic::kExact) return Scalar(mpq_class(value));
  return Scalar(static_cast<double>(value));
}

Scalar Scalar::ratio(Arithmetic mode, long num, long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  if (mode == Arithmetic::kExact) return Scalar(mpq_class(num, den));
  return Scalar(static_cast<double>(num) / static_cast<double>(den));
}

Scalar Scalar::from_double(Arithmetic mode, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite scalar");
  if (mode == Arithmetic::kFloat) return Scalar(value);
  return Scalar(mpq_class(value));
}

Scalar Scalar::power_of_two(Arithmetic mode, int exponent) {
  if (mode == Arithmetic::kFloat) return Scalar(std::ldexp(1.0, exponent));
  mpz_class p = 1;
  p <<= static_cast<unsigned long>(std::abs(exponent));
  return exponent >= 0 ? Scalar(mpq_class(p)) : Scalar(mpq_class(1, p));
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return nearest_double(*q);
  return std::get<double>(value_);
}

const mpq_class& Scalar::rational() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
  throw ArithmeticMismatch("float scalar has no exact rational value");
}

Scalar Scalar::in_mode(Arithmetic mode) const {
  if (mode == this->mode()) return *this;
  if (mode == Arithmetic::kFloat) return Scalar(to_double());
  return from_double(mode, std::get<double>(value_));
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Scalar Scalar::pow(unsigned exponent) const {
  Scalar result = one(mode());
  Scalar base = *this;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
  return format_double(std::get<double>(value_));
}

std::string Scalar::to_decimal() const { return format_double(to_double()); }

Scalar& Scalar::operator+=(const Scalar& other) {
  require_same_mode(*this, other);
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q += std::get<mpq_class>(other.value_);
  } else {
    std::get<double>(value_) += std::get<double>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  require_same_mode(*this, other);
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q -= std::get<mpq_class>(other.value_);
  } else {
    std::get<double>(value_) -= std::get<double>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  require_same_mode(*this, other);
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q *= std::get<mpq_class>(other.value_);
  } else {
    std::get<double>(value_) *= std::get<double>(other.value_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  require_same_mode(*this, other);
  if (other.is_zero()) throw InvalidArgument("division by zero");
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    *q /= std::get<mpq_class>(other.value_);
  } else {
    std::get<double>(value_) /= std::get<double>(other.value_);
  }
  return *this;
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) {
    return Scalar(mpq_class(-*q));
  }
  return Scalar(-std::get<double>(value_));
}

int compare(const Scalar& a, const Scalar& b) {
  require_same_mode(a, b);
  if (const auto* q = std::get_if<mpq_class>(&a.value_)) {
    const int c = cmp(*q, std::get<mpq_class>(b.value_));
    return (c > 0) - (c < 0);
  }
  const double x = std::get<double>(a.value_);
  const double y = std::get<double>(b.value_);
  return (x > y) - (x < y);
}

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, end);
}

}  // namespace boundary_walk
