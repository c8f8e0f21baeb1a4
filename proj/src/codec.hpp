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

#include "bignum.hpp"
#include "rational.hpp"

namespace phemu {

/// Fixed-point codec parameters.
///
/// A value x is carried as the pair (x*10^k, 10^k); each side is then
/// mapped into [0, z), z = 2^i, so that negative numbers ride on the upper
/// half of the range and modular arithmetic matches signed machine
/// arithmetic, wraparound included.
///
/// Defaults: k = 12, i = 128. Freshly encoded 2-digit operands scale to at
/// most 10^14, so even their pairwise products (10^28 in numerator and
/// denominator) stay far below z/2 = 2^127.
struct CodecParams {
  unsigned k = 12;  // denominator is 10^k
  unsigned i = 128;  // sign threshold z = 2^i

  Bignum z() const { return Bignum::pow2(i); }
  Bignum half_z() const { return Bignum::pow2(i - 1); }
  Bignum pow10k() const { return Bignum::pow10(k); }

  /// Throws Config when i is 0 or either parameter is absurdly large.
  void validate() const;

  bool operator==(const CodecParams&) const = default;
};

/// A plaintext value after both encoding steps: numerator and denominator,
/// each sign-mapped into [0, z). This is the unit the schemes encrypt.
struct EncodedRational {
  Bignum num;
  Bignum den;
};

/// Sign-maps n into [0, z). Accepts -z/2 < n < z/2; anything else is a
/// Range error. (The decoder's strict upper-half test makes exactly -z/2
/// non-roundtrippable, so it is rejected here.)
Bignum sign_encode(const Bignum& n, const CodecParams& params);

/// Reduces n mod z first, then folds the upper half back to negatives:
/// m > z/2 becomes m - z. Total for any non-negative input; m = z/2 stays
/// positive (strict inequality).
Bignum sign_decode(const Bignum& n, const CodecParams& params);

/// Sign-maps with wraparound instead of a range check: n mod z. Used when
/// emulating machine arithmetic that is allowed to overflow.
Bignum sign_encode_wrapping(const Bignum& n, const CodecParams& params);

/// Encodes an exact decimal as (x*10^k, 10^k), sign-mapped.
/// Errors: Precision when x has more than k fractional digits (no silent
/// rounding), Range when |x*10^k| reaches z/2.
EncodedRational encode(const Rational& x, const CodecParams& params);

/// Encodes an arbitrary exact rational by truncating toward zero beyond k
/// fractional digits. With wrap set, an out-of-range scaled value wraps
/// mod z instead of raising Range. This is the re-encryption agent's path.
EncodedRational encode_truncating(const Rational& x, const CodecParams& params,
                                  bool wrap = false);

/// Inverse of encode: sign-decodes both sides and divides exactly.
/// Throws DivisionByZero when the denominator decodes to zero.
Rational decode(const EncodedRational& v, const CodecParams& params);
Rational decode_components(const Bignum& num, const Bignum& den,
                           const CodecParams& params);

}  // namespace phemu
