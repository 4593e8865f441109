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

#include "boundary_walk/text.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <vector>

#include "boundary_walk/error.hpp"

namespace boundary_walk {

namespace {

// Cursor over the literal that reports 1-based columns.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  std::size_t column() const { return pos_ + 1; }
  void advance() { ++pos_; }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::int64_t integer() {
    const std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    std::int64_t value = 0;
    const char* first = text_.data() + start;
    if (first < text_.data() + pos_ && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || pos_ == start) {
      pos_ = start;
      fail("expected an integer");
    }
    return value;
  }

  std::vector<std::int64_t> integer_list(char separator) {
    std::vector<std::int64_t> values{integer()};
    while (consume(separator)) values.push_back(integer());
    return values;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("malformed element literal \"" + std::string(text_) +
                         "\" at column " + std::to_string(column()) + ": " +
                         message,
                     column());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string join(const std::vector<std::int64_t>& values, char separator) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += separator;
    out += std::to_string(values[i]);
  }
  return out;
}

mpq_class parse_exact_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ParseError("expected a number", i + 1);
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    const auto [ptr, ec] =
        std::from_chars(text.data() + i + (i < text.size() && text[i] == '+'),
                        text.data() + text.size(), exponent);
    if (ec != std::errc()) throw ParseError("bad exponent", i + 1);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  if (i != text.size()) throw ParseError("trailing characters", i + 1);
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - scale;
  mpz_class scale_factor;
  mpz_ui_pow_ui(scale_factor.get_mpz_t(), 10,
                static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class value = shift >= 0 ? mpq_class(num * scale_factor)
                               : mpq_class(num, scale_factor);
  value.canonicalize();
  return value;
}

}  // namespace

std::string format_element(const GroupElement& g) {
  switch (g.group().kind) {
    case GroupKind::kLattice:
      return join(g.as_vector().coords, ',');
    case GroupKind::kCyclic:
      return std::to_string(g.as_residue().value);
    case GroupKind::kFree: {
      const auto& letters = g.as_word().letters;
      if (letters.empty()) return "1";
      std::string out;
      for (int letter : letters) {
        out += static_cast<char>('a' + std::abs(letter) - 1);
        if (letter < 0) out += "^-1";
      }
      return out;
    }
    case GroupKind::kLamplighter: {
      const auto& state = g.as_lamps();
      const char site_separator = g.group().rank == 1 ? ',' : '|';
      std::string out = "p=" + join(state.position, ',') + ";L=";
      for (std::size_t i = 0; i < state.lamps.size(); ++i) {
        if (i != 0) out += site_separator;
        out += join(state.lamps[i], ',');
      }
      return out;
    }
  }
  return "?";
}

GroupElement parse_element(const GroupSpec& spec, std::string_view text) {
  text = trim(text);
  Reader in(text);
  switch (spec.kind) {
    case GroupKind::kLattice: {
      auto coords = in.integer_list(',');
      if (!in.done()) in.fail("unexpected character");
      if (coords.size() != static_cast<std::size_t>(spec.rank)) {
        in.fail("expected " + std::to_string(spec.rank) + " coordinates");
      }
      return {spec, IntVector{std::move(coords)}};
    }
    case GroupKind::kCyclic: {
      const auto value = in.integer();
      if (!in.done()) in.fail("unexpected character");
      return {spec, CyclicResidue{value}};
    }
    case GroupKind::kFree: {
      std::vector<int> letters;
      if (text == "1") return identity(spec);
      while (!in.done()) {
        const char c = in.peek();
        const bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
        const int index =
            std::tolower(static_cast<unsigned char>(c)) - 'a' + 1;
        if (!std::isalpha(static_cast<unsigned char>(c)) || index > spec.rank) {
          in.fail("expected a generator letter");
        }
        in.advance();
        int letter = upper ? -index : index;
        if (in.consume('^')) {
          in.expect('-');
          in.expect('1');
          letter = -letter;
        }
        letters.push_back(letter);
      }
      return {spec, ReducedWord{std::move(letters)}};
    }
    case GroupKind::kLamplighter: {
      in.expect('p');
      in.expect('=');
      auto position = in.integer_list(',');
      if (position.size() != static_cast<std::size_t>(spec.rank)) {
        in.fail("position needs " + std::to_string(spec.rank) + " coordinates");
      }
      std::vector<std::vector<std::int64_t>> lamps;
      if (in.consume(';')) {
        in.expect('L');
        in.expect('=');
        if (!in.done()) {
          if (spec.rank == 1) {
            for (auto site : in.integer_list(',')) lamps.push_back({site});
          } else {
            do {
              auto site = in.integer_list(',');
              if (site.size() != static_cast<std::size_t>(spec.rank)) {
                in.fail("lamp site needs " + std::to_string(spec.rank) +
                        " coordinates");
              }
              lamps.push_back(std::move(site));
            } while (in.consume('|'));
          }
        }
      }
      if (!in.done()) in.fail("unexpected character");
      return {spec, LampState{std::move(position), std::move(lamps)}};
    }
  }
  in.fail("unknown group kind");
}

Scalar parse_scalar(Arithmetic mode, std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty weight literal", 1);
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const mpq_class num = parse_exact_decimal(text.substr(0, slash));
    const mpq_class den = parse_exact_decimal(text.substr(slash + 1));
    if (sgn(den) == 0) throw ParseError("zero denominator", slash + 2);
    mpq_class value = num / den;
    if (mode == Arithmetic::kExact) return Scalar(value);
    return Scalar(value.get_d());
  }
  if (mode == Arithmetic::kExact) return Scalar(parse_exact_decimal(text));
  double value = 0;
  const char* first = text.data() + (text.front() == '+');
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("malformed number \"" + std::string(text) + "\"",
                     static_cast<std::size_t>(ptr - text.data()) + 1);
  }
  return Scalar(value);
}

}  // namespace boundary_walk
