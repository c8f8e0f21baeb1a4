/*
 * Copyright 2026 The phemu Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "bignum.hpp"

namespace phemu {

/// Exact rational number, always kept reduced with a positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  explicit Rational(Bignum value) : num_(std::move(value)), den_(1) {}
  Rational(Bignum numerator, Bignum denominator);
  Rational(long numerator, long denominator = 1)
      : Rational(Bignum(numerator), Bignum(denominator)) {}

  /// Parses an exact decimal like "-12.75" or "42". Throws Parse on
  /// anything else (no exponents, no lone '.').
  static Rational from_decimal_string(std::string_view text);

  const Bignum& num() const { return num_; }
  const Bignum& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_negative() const { return num_.is_negative(); }
  bool is_integer() const { return den_ == Bignum(1); }

  Rational operator+(const Rational& rhs) const;
  Rational operator-(const Rational& rhs) const;
  Rational operator*(const Rational& rhs) const;
  /// Throws DivisionByZero when rhs is zero.
  Rational operator/(const Rational& rhs) const;
  Rational operator-() const;

  bool operator==(const Rational& rhs) const {
    return num_ == rhs.num_ && den_ == rhs.den_;
  }
  bool operator!=(const Rational& rhs) const { return !(*this == rhs); }

  /// trunc(value * 10^k), rounding toward zero.
  Bignum trunc_scaled(unsigned k) const;

  /// "n/d", or just "n" for integers.
  std::string to_fraction_string() const;
  /// Decimal rendering truncated toward zero at `max_frac_digits` places,
  /// trailing zeros trimmed.
  std::string to_decimal_string(unsigned max_frac_digits) const;

 private:
  void normalize();

  Bignum num_;
  Bignum den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

}  // namespace phemu
