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

#include "codec.hpp"

#include "errors.hpp"

namespace phemu {

void CodecParams::validate() const {
  if (i == 0) fail(ErrorCode::Config, "codec parameter i must be >= 1");
  if (i > 8192) fail(ErrorCode::Config, "codec parameter i too large (max 8192)");
  if (k > 2400) fail(ErrorCode::Config, "codec parameter k too large (max 2400)");
}

Bignum sign_encode(const Bignum& n, const CodecParams& params) {
  const Bignum half = params.half_z();
  if (n >= half || n <= -half)
    fail(ErrorCode::Range, "value " + n.to_dec() +
                               " outside the encodable range (-2^" +
                               std::to_string(params.i - 1) + ", 2^" +
                               std::to_string(params.i - 1) + ")");
  return n.is_negative() ? n + params.z() : n;
}

Bignum sign_decode(const Bignum& n, const CodecParams& params) {
  Bignum m = n.mod_floor(params.z());
  if (m > params.half_z()) m -= params.z();
  return m;
}

Bignum sign_encode_wrapping(const Bignum& n, const CodecParams& params) {
  return n.mod_floor(params.z());
}

EncodedRational encode(const Rational& x, const CodecParams& params) {
  params.validate();
  const Rational scaled = x * Rational(Bignum::pow10(params.k));
  if (!scaled.is_integer())
    fail(ErrorCode::Precision,
         "value has more than " + std::to_string(params.k) +
             " fractional digits; refusing to round");
  return EncodedRational{sign_encode(scaled.num(), params),
                         sign_encode(params.pow10k(), params)};
}

EncodedRational encode_truncating(const Rational& x, const CodecParams& params,
                                  bool wrap) {
  params.validate();
  const Bignum scaled = x.trunc_scaled(params.k);
  return EncodedRational{wrap ? sign_encode_wrapping(scaled, params)
                              : sign_encode(scaled, params),
                         sign_encode(params.pow10k(), params)};
}

Rational decode_components(const Bignum& num, const Bignum& den,
                           const CodecParams& params) {
  const Bignum d = sign_decode(den, params);
  if (d.is_zero())
    fail(ErrorCode::DivisionByZero, "denominator decodes to zero");
  return Rational(sign_decode(num, params), d);
}

Rational decode(const EncodedRational& v, const CodecParams& params) {
  return decode_components(v.num, v.den, params);
}

}  // namespace phemu
