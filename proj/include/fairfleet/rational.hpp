// Copyright 2026 The fairfleet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairfleet {

/// Exact rational number on 64-bit numerator/denominator.
///
/// Every profit value and fairness comparison in the library goes through
/// this type. Verdicts flip on ties, so there is no floating point anywhere
/// on a decision path. Intermediate products are computed in 128-bit and an
/// std::overflow_error is thrown if a reduced result does not fit.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit on purpose
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    __int128 n = num;
    __int128 d = den;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    assign_reduced(n, d);
  }

  // Accepts "a" or "a/b" with optional leading '-'. No whitespace, no
  // decimals: the text format is canonical and exact.
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return Rational(parse_int(text, "rational"), 1);
    }
    const std::int64_t num = parse_int(text.substr(0, slash), "rational numerator");
    const std::int64_t den = parse_int(text.substr(slash + 1), "rational denominator");
    return Rational(num, den);
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_parts(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                      i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_parts(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                      i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_parts(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational: division by zero");
    return from_parts(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    if (r.num_ == INT64_MIN) throw std::overflow_error("rational: negate overflow");
    r.num_ = -r.num_;
    return r;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
  }

 private:
  using i128 = __int128;

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_parts(i128 num, i128 den) {
    Rational r;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    r.assign_reduced(num, den);
    return r;
  }

  void assign_reduced(i128 num, i128 den) {
    // den > 0 here.
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    const i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) {
      throw std::overflow_error("rational: value out of 64-bit range");
    }
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  static std::int64_t parse_int(std::string_view text, const char* what) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" +
                                  std::string(text) + "'");
    }
    return value;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

// lcm on positive 64-bit values, throwing instead of wrapping.
inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) throw std::domain_error("lcm: arguments must be positive");
  std::int64_t g = a;
  std::int64_t r = b;
  while (r != 0) {
    const std::int64_t t = g % r;
    g = r;
    r = t;
  }
  const __int128 l = static_cast<__int128>(a / g) * b;
  if (l > INT64_MAX) throw std::overflow_error("lcm: out of 64-bit range");
  return static_cast<std::int64_t>(l);
}

}  // namespace fairfleet
