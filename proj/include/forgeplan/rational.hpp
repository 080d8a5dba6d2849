// Copyright 2026 The forgeplan Authors
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

#ifndef FORGEPLAN_RATIONAL_HPP
#define FORGEPLAN_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace forgeplan {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Exact rational with a positive, normalized denominator. Quantities of
// forgings per part (and their sums) are fractions with small denominators,
// so discount-interval membership can be decided without floating-point
// tolerance games. Arithmetic goes through 128-bit intermediates and throws
// on overflow of the normalized result.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    normalize();
  }

  static Rational from_integer(std::int64_t v) { return Rational(v, 1); }

  // Accepts "7", "-3/4" and plain decimals such as "0.5" (parsed exactly).
  static Rational parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational& operator+=(const Rational& o) {
    __int128 n = static_cast<__int128>(num_) * o.den_ +
                 static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    assign(n, d);
    return *this;
  }
  Rational& operator-=(const Rational& o) { return *this += Rational(-o.num_, o.den_); }
  Rational& operator*=(const Rational& o) {
    __int128 n = static_cast<__int128>(num_) * o.num_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    assign(n, d);
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // Comparison against a double-valued quantity threshold. Exact whenever
  // threshold * den() is exactly representable (integer thresholds always
  // are); otherwise deterministic double semantics.
  bool greater_than(double threshold) const {
    return static_cast<double>(num_) > threshold * static_cast<double>(den_);
  }
  bool less_equal(double threshold) const { return !greater_than(threshold); }

 private:
  void assign(__int128 n, __int128 d) {
    if (d == 0) throw Error("rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw Error("rational: overflow after normalization");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }
  void normalize() { assign(num_, den_); }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw ParseError("rational: empty string");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t p1 = 0, p2 = 0;
      std::int64_t n = std::stoll(text.substr(0, slash), &p1);
      std::int64_t d = std::stoll(text.substr(slash + 1), &p2);
      if (p1 != slash || p2 != text.size() - slash - 1)
        throw ParseError("rational: trailing characters in '" + text + "'");
      return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t p = 0;
      std::int64_t n = std::stoll(text, &p);
      if (p != text.size())
        throw ParseError("rational: trailing characters in '" + text + "'");
      return Rational(n, 1);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || frac_len > 18)
      throw ParseError("rational: unsupported decimal '" + text + "'");
    std::size_t p = 0;
    std::int64_t n = std::stoll(digits, &p);
    if (p != digits.size())
      throw ParseError("rational: trailing characters in '" + text + "'");
    std::int64_t d = 1;
    for (std::size_t i = 0; i < frac_len; ++i) d *= 10;
    return Rational(n, d);
  } catch (const std::invalid_argument&) {
    throw ParseError("rational: cannot parse '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("rational: out of range '" + text + "'");
  }
}

}  // namespace forgeplan

#endif  // FORGEPLAN_RATIONAL_HPP
