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

#include "numtheory.hpp"

#include <cstdint>
#include <vector>

#include "errors.hpp"

// The arithmetic layer lives in bignum.cpp; this file owns the number-
// theoretic algorithms: rejection sampling, Miller-Rabin, and the windowed
// incremental sieve behind prime and safe-prime search.

namespace phemu {

namespace {

constexpr std::uint32_t kSieveBound = 100000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSieveBound, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t n = 2; n < kSieveBound; ++n) {
      if (composite[n]) continue;
      out.push_back(n);
      for (std::uint64_t m = static_cast<std::uint64_t>(n) * n; m < kSieveBound;
           m += n)
        composite[m] = true;
    }
    return out;
  }();
  return primes;
}

// Window of odd candidates q0 + 2t, t in [0, steps). Marks t composite when
// a small prime divides q0 + 2t, or, when check_doubled is set, 2(q0+2t)+1.
// Sieve primes are capped below min_candidate so a candidate can never be
// rejected for equalling its own factor.
std::vector<bool> sieve_odd_window(const Bignum& q0, std::size_t steps,
                                   bool check_doubled,
                                   std::uint64_t prime_cap) {
  std::vector<bool> composite(steps, false);
  for (std::uint32_t r : small_primes()) {
    if (r == 2) continue;
    if (r >= prime_cap) break;
    const std::uint64_t res = q0.mod_u64(r);
    // q0 + 2t ≡ 0 (mod r)  =>  t ≡ -res * inv2 (mod r)
    const std::uint64_t inv2 = (r + 1) / 2;  // 2 * inv2 ≡ 1 (mod r)
    std::uint64_t t = ((r - res) % r) * inv2 % r;
    for (; t < steps; t += r) composite[t] = true;
    if (check_doubled) {
      // 2(q0 + 2t) + 1 ≡ 0 (mod r)  =>  4t ≡ -(2 res + 1) (mod r)
      const std::uint64_t inv4 = inv2 * inv2 % r;
      const std::uint64_t rhs = (2 * r - (2 * res + 1) % r) % r;
      std::uint64_t u = rhs * inv4 % r;
      for (; u < steps; u += r) composite[u] = true;
    }
  }
  return composite;
}

Bignum random_odd_with_top_bit(unsigned bits, RandomSource& rng) {
  Bignum cand = rand_bits(bits, rng);
  if (!cand.is_odd()) cand += 1;  // max even draw is 2^bits - 2, so no carry
  return cand;
}

}  // namespace

Bignum mod_pow(const Bignum& base, const Bignum& exp, const Bignum& modulus) {
  if (modulus < Bignum(2)) fail(ErrorCode::Domain, "modulus must be >= 2");
  if (exp.is_negative()) fail(ErrorCode::Domain, "negative exponent");
  return mod_pow_raw(base, exp, modulus);
}

Bignum mod_inv(const Bignum& a, const Bignum& modulus) {
  if (modulus < Bignum(2)) fail(ErrorCode::Domain, "modulus must be >= 2");
  // extended Euclid over (modulus, a mod modulus)
  Bignum r_prev = modulus;
  Bignum r = a.mod_floor(modulus);
  Bignum t_prev(0), t(1);
  while (!r.is_zero()) {
    const Bignum q = r_prev / r;
    Bignum r_next = r_prev - q * r;
    r_prev = std::move(r);
    r = std::move(r_next);
    Bignum t_next = t_prev - q * t;
    t_prev = std::move(t);
    t = std::move(t_next);
  }
  if (r_prev != Bignum(1))
    fail(ErrorCode::NotInvertible,
         "value is not invertible modulo " + modulus.to_dec());
  return t_prev.mod_floor(modulus);
}

Bignum rand_below(const Bignum& bound, RandomSource& rng) {
  if (bound < Bignum(1)) fail(ErrorCode::Domain, "bound must be >= 1");
  const std::size_t bits = bound.bit_length();
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = bits % 64;
  std::vector<std::uint64_t> buf(words);
  while (true) {
    for (auto& w : buf) w = rng.next_u64();
    if (top_bits != 0) buf[words - 1] &= ~0ULL >> (64 - top_bits);
    Bignum x = Bignum::from_words(buf);
    if (x < bound) return x;
  }
}

Bignum rand_bits(unsigned bits, RandomSource& rng) {
  if (bits == 0) fail(ErrorCode::Domain, "bit count must be >= 1");
  return Bignum::pow2(bits - 1) +
         (bits == 1 ? Bignum(0) : rand_below(Bignum::pow2(bits - 1), rng));
}

bool is_probable_prime(const Bignum& n, int rounds, RandomSource& rng) {
  if (n < Bignum(2)) return false;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    if (n == Bignum(static_cast<unsigned long>(p))) return true;
    if (n.mod_u64(p) == 0) return false;
  }
  // n - 1 = d * 2^s with d odd
  const Bignum n_minus_1 = n - 1;
  Bignum d = n_minus_1;
  unsigned s = 0;
  while (!d.is_odd()) {
    d = d / 2;
    ++s;
  }
  const Bignum two(2);
  for (int round = 0; round < rounds; ++round) {
    const Bignum a = rand_below(n - 3, rng) + two;  // a in [2, n-2]
    Bignum x = mod_pow(a, d, n);
    if (x == Bignum(1) || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned j = 1; j < s; ++j) {
      x = (x * x).mod_floor(n);
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Bignum gen_prime(unsigned bits, RandomSource& rng) {
  if (bits < kMinPrimeBits) fail(ErrorCode::Domain, "prime size below 16 bits");
  const std::size_t window = 1 << 14;
  const std::uint64_t cap =
      bits - 1 >= 18 ? kSieveBound : (1ULL << (bits - 1));
  while (true) {
    const Bignum start = random_odd_with_top_bit(bits, rng);
    if (start.bit_length() != bits) continue;
    const auto composite = sieve_odd_window(start, window, false, cap);
    for (std::size_t t = 0; t < window; ++t) {
      if (composite[t]) continue;
      Bignum cand = start + Bignum(static_cast<long>(2 * t));
      if (cand.bit_length() != bits) break;  // walked off the range; redraw
      if (is_probable_prime(cand, kMillerRabinRounds, rng)) return cand;
    }
  }
}

Bignum gen_safe_prime(unsigned bits, RandomSource& rng) {
  if (bits < kMinPrimeBits) fail(ErrorCode::Domain, "prime size below 16 bits");
  const std::size_t window = 1 << 16;
  const unsigned q_bits = bits - 1;
  const std::uint64_t cap =
      q_bits - 1 >= 18 ? kSieveBound : (1ULL << (q_bits - 1));
  while (true) {
    const Bignum start = random_odd_with_top_bit(q_bits, rng);
    if (start.bit_length() != q_bits) continue;
    const auto composite = sieve_odd_window(start, window, true, cap);
    for (std::size_t t = 0; t < window; ++t) {
      if (composite[t]) continue;
      Bignum q = start + Bignum(static_cast<long>(2 * t));
      if (q.bit_length() != q_bits) break;
      if (!is_probable_prime(q, 1, rng)) continue;
      Bignum p = q * 2 + 1;
      if (!is_probable_prime(p, 1, rng)) continue;
      if (is_probable_prime(q, kMillerRabinRounds, rng) &&
          is_probable_prime(p, kMillerRabinRounds, rng))
        return p;
    }
  }
}

}  // namespace phemu
