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

#include "rational.hpp"

#include <cctype>
#include <ostream>

#include "errors.hpp"

namespace phemu {

Rational::Rational(Bignum numerator, Bignum denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) fail(ErrorCode::DivisionByZero, "zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = Bignum(1);
    return;
  }
  const Bignum g = gcd(num_, den_);
  num_ = num_.divide_exact(g);
  den_ = den_.divide_exact(g);
}

Rational Rational::from_decimal_string(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  const auto dot = rest.find('.');
  std::string_view int_part = rest.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  auto all_digits = [](std::string_view s) {
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (int_part.empty() || !all_digits(int_part) || !all_digits(frac_part) ||
      (dot != std::string_view::npos && frac_part.empty()))
    fail(ErrorCode::Parse, "invalid decimal value: '" + std::string(text) + "'");
  Bignum scaled = Bignum::from_dec(std::string(int_part) + std::string(frac_part));
  if (negative) scaled = -scaled;
  return Rational(std::move(scaled),
                  Bignum::pow10(static_cast<unsigned>(frac_part.size())));
}

Rational Rational::operator+(const Rational& rhs) const {
  return Rational(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

Rational Rational::operator-(const Rational& rhs) const {
  return Rational(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

Rational Rational::operator*(const Rational& rhs) const {
  return Rational(num_ * rhs.num_, den_ * rhs.den_);
}

Rational Rational::operator/(const Rational& rhs) const {
  if (rhs.is_zero()) fail(ErrorCode::DivisionByZero, "division by zero");
  return Rational(num_ * rhs.den_, den_ * rhs.num_);
}

Rational Rational::operator-() const {
  Rational out = *this;
  out.num_ = -out.num_;
  return out;
}

Bignum Rational::trunc_scaled(unsigned k) const {
  return (num_ * Bignum::pow10(k)) / den_;  // truncated division
}

std::string Rational::to_fraction_string() const {
  if (is_integer()) return num_.to_dec();
  return num_.to_dec() + "/" + den_.to_dec();
}

std::string Rational::to_decimal_string(unsigned max_frac_digits) const {
  const Bignum mag = num_.abs();
  std::string out = is_negative() ? "-" : "";
  out += (mag / den_).to_dec();
  Bignum rem = mag % den_;
  std::string frac;
  for (unsigned j = 0; j < max_frac_digits && !rem.is_zero(); ++j) {
    rem *= 10;
    frac += (rem / den_).to_dec();
    rem = rem % den_;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out == "-0" ? "0" : out;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) {
  return os << value.to_fraction_string();
}

}  // namespace phemu
