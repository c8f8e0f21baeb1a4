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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phemu {

/// Arbitrary-precision signed integer with value semantics. Exact at any
/// magnitude; non-negativity where required is a caller contract, not a
/// property of the type.
///
/// Representation: sign and little-endian 64-bit limbs, normalized (no
/// leading zero limbs, zero has an empty limb vector). Division and
/// remainder are truncated (C semantics); mod_floor gives the
/// always-non-negative residue for a positive modulus.
class Bignum {
 public:
  Bignum() = default;
  Bignum(int value) : Bignum(static_cast<long long>(value)) {}
  Bignum(long value) : Bignum(static_cast<long long>(value)) {}
  Bignum(long long value);
  Bignum(unsigned long value);

  /// Parses a base-10 integer, optionally signed. Throws Parse on bad input.
  static Bignum from_dec(std::string_view text);
  /// Parses hex without 0x prefix, either case.
  static Bignum from_hex(std::string_view text);
  /// Builds a non-negative value from little-endian 64-bit words.
  static Bignum from_words(std::span<const std::uint64_t> words);
  static Bignum pow2(unsigned bits);
  static Bignum pow10(unsigned k);

  std::string to_dec() const;
  /// Lowercase hex without prefix; requires a non-negative value.
  std::string to_hex() const;

  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }
  bool is_odd() const { return sign_ != 0 && (limbs_[0] & 1); }
  int sign() const { return sign_; }

  /// Number of significant bits; 0 for the value 0.
  std::size_t bit_length() const;
  /// Bit i of the magnitude (little-endian).
  bool bit(std::size_t i) const;
  /// Magnitude mod a small divisor; requires divisor != 0.
  std::uint64_t mod_u64(std::uint64_t divisor) const;

  bool fits_u64() const;
  std::uint64_t to_u64() const;  // requires fits_u64()
  bool fits_i64() const;
  std::int64_t to_i64() const;

  Bignum abs() const;
  Bignum operator-() const;

  Bignum operator+(const Bignum& rhs) const;
  Bignum operator-(const Bignum& rhs) const;
  Bignum operator*(const Bignum& rhs) const;
  /// Truncated division/remainder (C semantics). Throws DivisionByZero.
  Bignum operator/(const Bignum& rhs) const;
  Bignum operator%(const Bignum& rhs) const;

  Bignum& operator+=(const Bignum& rhs);
  Bignum& operator-=(const Bignum& rhs);
  Bignum& operator*=(const Bignum& rhs);

  /// Floor remainder: result in [0, m) for m > 0 regardless of sign.
  Bignum mod_floor(const Bignum& m) const;
  /// Exact division; throws Internal if a remainder would be lost.
  Bignum divide_exact(const Bignum& divisor) const;

  bool operator==(const Bignum& rhs) const {
    return sign_ == rhs.sign_ && limbs_ == rhs.limbs_;
  }
  bool operator!=(const Bignum& rhs) const { return !(*this == rhs); }
  bool operator<(const Bignum& rhs) const { return compare(rhs) < 0; }
  bool operator<=(const Bignum& rhs) const { return compare(rhs) <= 0; }
  bool operator>(const Bignum& rhs) const { return compare(rhs) > 0; }
  bool operator>=(const Bignum& rhs) const { return compare(rhs) >= 0; }

  const std::vector<std::uint64_t>& limbs() const { return limbs_; }

 private:
  int compare(const Bignum& rhs) const;
  void normalize();
  static Bignum from_magnitude(std::vector<std::uint64_t> limbs, int sign);
  static void divmod(const Bignum& a, const Bignum& b, Bignum& quotient,
                     Bignum& remainder);

  int sign_ = 0;
  std::vector<std::uint64_t> limbs_;
};

Bignum gcd(const Bignum& a, const Bignum& b);
Bignum lcm(const Bignum& a, const Bignum& b);

/// base^exp mod modulus without argument validation (Montgomery ladder for
/// odd moduli, plain square-and-multiply otherwise). Callers outside the
/// number-theory layer want mod_pow from numtheory.hpp instead.
Bignum mod_pow_raw(const Bignum& base, const Bignum& exp,
                   const Bignum& modulus);

std::ostream& operator<<(std::ostream& os, const Bignum& value);

}  // namespace phemu
