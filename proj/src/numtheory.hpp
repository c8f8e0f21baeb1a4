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
#include "rng.hpp"

namespace phemu {

/// base^exp mod modulus. Requires modulus >= 2 and exp >= 0 (Domain error).
Bignum mod_pow(const Bignum& base, const Bignum& exp, const Bignum& modulus);

/// Multiplicative inverse mod modulus. Requires modulus >= 2; throws
/// NotInvertible when gcd(a, modulus) != 1; it never returns a wrong value.
Bignum mod_inv(const Bignum& a, const Bignum& modulus);

/// Uniform value in [0, bound) by rejection sampling; no modulo bias.
/// Requires bound >= 1 (Domain error).
Bignum rand_below(const Bignum& bound, RandomSource& rng);

/// Uniform value with exactly `bits` bits (top bit set). Requires bits >= 1.
Bignum rand_bits(unsigned bits, RandomSource& rng);

/// Miller-Rabin with `rounds` random bases drawn from rng.
bool is_probable_prime(const Bignum& n, int rounds, RandomSource& rng);

inline constexpr int kMillerRabinRounds = 40;
inline constexpr unsigned kMinPrimeBits = 16;

/// Probable prime of exactly `bits` bits (top bit set), Miller-Rabin with
/// kMillerRabinRounds rounds. Requires bits >= kMinPrimeBits (Domain error).
Bignum gen_prime(unsigned bits, RandomSource& rng);

/// Safe prime p of exactly `bits` bits: p and (p-1)/2 both probable primes.
Bignum gen_safe_prime(unsigned bits, RandomSource& rng);

}  // namespace phemu
