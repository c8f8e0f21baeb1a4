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

#include "bignum.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <ostream>

#include "errors.hpp"

namespace phemu {

namespace {

using Limb = std::uint64_t;
using Wide = unsigned __int128;
using SignedWide = __int128;
using Limbs = std::vector<Limb>;

void trim(Limbs& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

int cmp_mag(const Limbs& a, const Limbs& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

Limbs add_mag(const Limbs& a, const Limbs& b) {
  const Limbs& big = a.size() >= b.size() ? a : b;
  const Limbs& small = a.size() >= b.size() ? b : a;
  Limbs out(big.size() + 1, 0);
  Wide carry = 0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    Wide cur = (Wide)big[i] + (i < small.size() ? small[i] : 0) + carry;
    out[i] = (Limb)cur;
    carry = cur >> 64;
  }
  out[big.size()] = (Limb)carry;
  trim(out);
  return out;
}

// requires |a| >= |b|
Limbs sub_mag(const Limbs& a, const Limbs& b) {
  Limbs out(a.size(), 0);
  Limb borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Limb bi = i < b.size() ? b[i] : 0;
    const Limb lo = a[i] - bi;
    const Limb next_borrow = (a[i] < bi) | (Limb)(lo < borrow);
    out[i] = lo - borrow;
    borrow = next_borrow;
  }
  trim(out);
  return out;
}

Limbs mul_mag(const Limbs& a, const Limbs& b) {
  if (a.empty() || b.empty()) return {};
  Limbs out(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Wide carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      Wide cur = (Wide)out[i + j] + (Wide)a[i] * b[j] + carry;
      out[i + j] = (Limb)cur;
      carry = cur >> 64;
    }
    out[i + b.size()] = (Limb)carry;
  }
  trim(out);
  return out;
}

// left shift by s bits, 0 <= s < 64, into `extra` additional limbs
Limbs shl_small(const Limbs& v, unsigned s, std::size_t extra) {
  Limbs out(v.size() + extra, 0);
  if (s == 0) {
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  Limb carry = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = (v[i] << s) | carry;
    carry = (Limb)(v[i] >> (64 - s));
  }
  if (extra > 0) out[v.size()] = carry;
  return out;
}

Limbs shr_small(const Limbs& v, unsigned s) {
  if (s == 0) {
    Limbs out = v;
    trim(out);
    return out;
  }
  Limbs out(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i] >> s;
    if (i + 1 < v.size()) out[i] |= v[i + 1] << (64 - s);
  }
  trim(out);
  return out;
}

// Knuth algorithm D over 64-bit limbs.
void divmod_mag(const Limbs& u, const Limbs& v, Limbs& q, Limbs& r) {
  if (v.empty()) fail(ErrorCode::DivisionByZero, "integer division by zero");
  if (cmp_mag(u, v) < 0) {
    q.clear();
    r = u;
    trim(r);
    return;
  }
  if (v.size() == 1) {
    const Limb d = v[0];
    q.assign(u.size(), 0);
    Wide rem = 0;
    for (std::size_t i = u.size(); i-- > 0;) {
      Wide cur = (rem << 64) | u[i];
      q[i] = (Limb)(cur / d);
      rem = cur % d;
    }
    trim(q);
    r.clear();
    if (rem != 0) r.push_back((Limb)rem);
    return;
  }

  const unsigned s = std::countl_zero(v.back());
  const Limbs vn = shl_small(v, s, 0);
  Limbs un = shl_small(u, s, 1);  // always one extra limb
  const std::size_t n = vn.size();
  const std::size_t m = un.size() - 1 - n;

  q.assign(m + 1, 0);
  const Limb vtop = vn[n - 1];
  const Limb vsecond = vn[n - 2];
  for (std::size_t j = m + 1; j-- > 0;) {
    const Wide num = ((Wide)un[j + n] << 64) | un[j + n - 1];
    Limb qhat;
    Wide rhat;
    if (un[j + n] == vtop) {
      qhat = ~(Limb)0;
      rhat = (Wide)un[j + n - 1] + vtop;
    } else {
      qhat = (Limb)(num / vtop);
      rhat = num % vtop;
    }
    while ((rhat >> 64) == 0 &&
           (Wide)qhat * vsecond > ((rhat << 64) | un[j + n - 2])) {
      --qhat;
      rhat += vtop;
    }
    // multiply and subtract
    SignedWide borrow = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Wide p = (Wide)qhat * vn[i];
      const SignedWide t =
          (SignedWide)((Wide)un[i + j]) - borrow - (SignedWide)(Limb)p;
      un[i + j] = (Limb)t;
      borrow = (SignedWide)(p >> 64) - (t >> 64);
    }
    const SignedWide t = (SignedWide)((Wide)un[j + n]) - borrow;
    un[j + n] = (Limb)t;
    if (t < 0) {  // qhat was one too large; add the divisor back
      --qhat;
      Wide carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const Wide cur = (Wide)un[i + j] + vn[i] + carry;
        un[i + j] = (Limb)cur;
        carry = cur >> 64;
      }
      un[j + n] += (Limb)carry;
    }
    q[j] = qhat;
  }
  trim(q);
  un.resize(n);
  r = shr_small(un, s);
}

Limb inverse_mod_2_64(Limb m0) {
  Limb x = m0;  // correct to 3 bits; Newton doubles per step
  for (int it = 0; it < 5; ++it) x *= 2 - m0 * x;
  return x;
}

// CIOS Montgomery multiplication: out = a * b * R^-1 mod m, all operands
// length L = m.size(), R = 2^(64 L). Scratch t must hold L + 2 limbs.
void montmul(const Limb* a, const Limb* b, const Limbs& m, Limb m_neg_inv,
             Limb* t, Limb* out) {
  const std::size_t L = m.size();
  std::fill(t, t + L + 2, 0);
  for (std::size_t i = 0; i < L; ++i) {
    Wide carry = 0;
    for (std::size_t j = 0; j < L; ++j) {
      const Wide cur = (Wide)t[j] + (Wide)a[i] * b[j] + carry;
      t[j] = (Limb)cur;
      carry = cur >> 64;
    }
    Wide cur = (Wide)t[L] + carry;
    t[L] = (Limb)cur;
    t[L + 1] += (Limb)(cur >> 64);

    const Limb u = t[0] * m_neg_inv;
    carry = ((Wide)t[0] + (Wide)u * m[0]) >> 64;
    for (std::size_t j = 1; j < L; ++j) {
      const Wide cur2 = (Wide)t[j] + (Wide)u * m[j] + carry;
      t[j - 1] = (Limb)cur2;
      carry = cur2 >> 64;
    }
    cur = (Wide)t[L] + carry;
    t[L - 1] = (Limb)cur;
    t[L] = t[L + 1] + (Limb)(cur >> 64);
    t[L + 1] = 0;
  }
  bool subtract = t[L] != 0;
  if (!subtract) {
    subtract = true;
    for (std::size_t i = L; i-- > 0;) {
      if (t[i] != m[i]) {
        subtract = t[i] > m[i];
        break;
      }
    }
  }
  if (subtract) {
    Limb borrow = 0;
    for (std::size_t i = 0; i < L; ++i) {
      const Limb lo = t[i] - m[i];
      const Limb next = (t[i] < m[i]) | (Limb)(lo < borrow);
      out[i] = lo - borrow;
      borrow = next;
    }
  } else {
    std::copy(t, t + L, out);
  }
}

Limbs padded(const Bignum& value, std::size_t L) {
  Limbs out = value.limbs();
  out.resize(L, 0);
  return out;
}

}  // namespace

Bignum::Bignum(long long value) {
  if (value == 0) return;
  sign_ = value < 0 ? -1 : 1;
  const Limb mag = value < 0 ? ~(Limb)value + 1 : (Limb)value;
  limbs_.push_back(mag);
}

Bignum::Bignum(unsigned long value) {
  if (value == 0) return;
  sign_ = 1;
  limbs_.push_back(value);
}

void Bignum::normalize() {
  trim(limbs_);
  if (limbs_.empty()) sign_ = 0;
}

Bignum Bignum::from_magnitude(std::vector<std::uint64_t> limbs, int sign) {
  Bignum out;
  out.limbs_ = std::move(limbs);
  out.sign_ = sign;
  out.normalize();
  return out;
}

int Bignum::compare(const Bignum& rhs) const {
  if (sign_ != rhs.sign_) return sign_ < rhs.sign_ ? -1 : 1;
  const int mag = cmp_mag(limbs_, rhs.limbs_);
  return sign_ >= 0 ? mag : -mag;
}

Bignum Bignum::from_dec(std::string_view text) {
  std::string_view rest = text;
  int sign = 1;
  if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
    sign = rest.front() == '-' ? -1 : 1;
    rest.remove_prefix(1);
  }
  if (rest.empty())
    fail(ErrorCode::Parse, "invalid decimal integer: '" + std::string(text) + "'");
  for (char c : rest)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(ErrorCode::Parse,
           "invalid decimal integer: '" + std::string(text) + "'");
  Bignum out;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    const std::size_t take = std::min<std::size_t>(19, rest.size() - pos);
    Limb chunk = 0;
    for (std::size_t i = 0; i < take; ++i)
      chunk = chunk * 10 + (Limb)(rest[pos + i] - '0');
    Bignum scale(1);
    for (std::size_t i = 0; i < take; ++i) scale *= Bignum(10);
    out = out * scale + Bignum(chunk);
    pos += take;
  }
  out.sign_ = out.limbs_.empty() ? 0 : sign;
  return out;
}

Bignum Bignum::from_hex(std::string_view text) {
  if (text.empty())
    fail(ErrorCode::Parse, "invalid hex integer: '" + std::string(text) + "'");
  Limbs limbs;
  Limb cur = 0;
  unsigned bits = 0;
  for (std::size_t i = text.size(); i-- > 0;) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    Limb nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else
      fail(ErrorCode::Parse, "invalid hex integer: '" + std::string(text) + "'");
    cur |= nibble << bits;
    bits += 4;
    if (bits == 64) {
      limbs.push_back(cur);
      cur = 0;
      bits = 0;
    }
  }
  if (bits != 0) limbs.push_back(cur);
  return from_magnitude(std::move(limbs), 1);
}

Bignum Bignum::from_words(std::span<const std::uint64_t> words) {
  return from_magnitude(Limbs(words.begin(), words.end()), 1);
}

Bignum Bignum::pow2(unsigned bits) {
  Limbs limbs(bits / 64 + 1, 0);
  limbs[bits / 64] = (Limb)1 << (bits % 64);
  return from_magnitude(std::move(limbs), 1);
}

Bignum Bignum::pow10(unsigned k) {
  Bignum out(1);
  const Bignum big_chunk((unsigned long)10000000000000000000ULL);  // 10^19
  while (k >= 19) {
    out *= big_chunk;
    k -= 19;
  }
  for (unsigned i = 0; i < k; ++i) out *= Bignum(10);
  return out;
}

std::string Bignum::to_dec() const {
  if (is_zero()) return "0";
  std::vector<std::string> chunks;
  Limbs cur = limbs_;
  const Limbs chunk_div = {10000000000000000000ULL};  // 10^19
  while (!cur.empty()) {
    Limbs q, r;
    divmod_mag(cur, chunk_div, q, r);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%019llu",
                  (unsigned long long)(r.empty() ? 0 : r[0]));
    chunks.emplace_back(buf);
    cur = std::move(q);
  }
  std::string out = sign_ < 0 ? "-" : "";
  // strip leading zeros of the most significant chunk
  const std::string& top = chunks.back();
  std::size_t lead = top.find_first_not_of('0');
  out += top.substr(lead == std::string::npos ? top.size() - 1 : lead);
  for (std::size_t i = chunks.size() - 1; i-- > 0;) out += chunks[i];
  return out;
}

std::string Bignum::to_hex() const {
  if (is_negative())
    fail(ErrorCode::Internal, "hex serialization of a negative value");
  if (is_zero()) return "0";
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(limbs_.size() * 16);
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    for (int shift = 60; shift >= 0; shift -= 4)
      out += digits[(limbs_[i] >> shift) & 0xf];
  }
  const std::size_t lead = out.find_first_not_of('0');
  return out.substr(lead);
}

std::size_t Bignum::bit_length() const {
  if (limbs_.empty()) return 0;
  return 64 * (limbs_.size() - 1) +
         (64 - std::countl_zero(limbs_.back()));
}

bool Bignum::bit(std::size_t i) const {
  const std::size_t limb = i / 64;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> (i % 64)) & 1;
}

std::uint64_t Bignum::mod_u64(std::uint64_t divisor) const {
  if (divisor == 0) fail(ErrorCode::DivisionByZero, "modulus is zero");
  Wide rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;)
    rem = ((rem << 64) | limbs_[i]) % divisor;
  return (Limb)rem;
}

bool Bignum::fits_u64() const { return sign_ >= 0 && limbs_.size() <= 1; }

std::uint64_t Bignum::to_u64() const {
  if (!fits_u64()) fail(ErrorCode::Internal, "value does not fit in u64");
  return limbs_.empty() ? 0 : limbs_[0];
}

bool Bignum::fits_i64() const {
  if (limbs_.size() > 1) return false;
  const Limb mag = limbs_.empty() ? 0 : limbs_[0];
  return sign_ < 0 ? mag <= ((Limb)1 << 63) : mag < ((Limb)1 << 63);
}

std::int64_t Bignum::to_i64() const {
  if (!fits_i64()) fail(ErrorCode::Internal, "value does not fit in i64");
  const Limb mag = limbs_.empty() ? 0 : limbs_[0];
  return sign_ < 0 ? -(std::int64_t)mag : (std::int64_t)mag;
}

Bignum Bignum::abs() const {
  Bignum out = *this;
  if (out.sign_ < 0) out.sign_ = 1;
  return out;
}

Bignum Bignum::operator-() const {
  Bignum out = *this;
  out.sign_ = -out.sign_;
  return out;
}

Bignum Bignum::operator+(const Bignum& rhs) const {
  if (sign_ == 0) return rhs;
  if (rhs.sign_ == 0) return *this;
  if (sign_ == rhs.sign_)
    return from_magnitude(add_mag(limbs_, rhs.limbs_), sign_);
  const int mag = cmp_mag(limbs_, rhs.limbs_);
  if (mag == 0) return Bignum();
  return mag > 0 ? from_magnitude(sub_mag(limbs_, rhs.limbs_), sign_)
                 : from_magnitude(sub_mag(rhs.limbs_, limbs_), rhs.sign_);
}

Bignum Bignum::operator-(const Bignum& rhs) const { return *this + (-rhs); }

Bignum Bignum::operator*(const Bignum& rhs) const {
  if (sign_ == 0 || rhs.sign_ == 0) return Bignum();
  return from_magnitude(mul_mag(limbs_, rhs.limbs_), sign_ * rhs.sign_);
}

void Bignum::divmod(const Bignum& a, const Bignum& b, Bignum& quotient,
                    Bignum& remainder) {
  Limbs q, r;
  divmod_mag(a.limbs_, b.limbs_, q, r);
  quotient = from_magnitude(std::move(q), a.sign_ * b.sign_);
  remainder = from_magnitude(std::move(r), a.sign_);
}

Bignum Bignum::operator/(const Bignum& rhs) const {
  Bignum q, r;
  divmod(*this, rhs, q, r);
  return q;
}

Bignum Bignum::operator%(const Bignum& rhs) const {
  Bignum q, r;
  divmod(*this, rhs, q, r);
  return r;
}

Bignum& Bignum::operator+=(const Bignum& rhs) { return *this = *this + rhs; }
Bignum& Bignum::operator-=(const Bignum& rhs) { return *this = *this - rhs; }
Bignum& Bignum::operator*=(const Bignum& rhs) { return *this = *this * rhs; }

Bignum Bignum::mod_floor(const Bignum& m) const {
  Bignum r = *this % m;
  if (r.is_negative()) r += m.abs();
  return r;
}

Bignum Bignum::divide_exact(const Bignum& divisor) const {
  Bignum q, r;
  divmod(*this, divisor, q, r);
  if (!r.is_zero())
    fail(ErrorCode::Internal, "inexact division in divide_exact");
  return q;
}

Bignum gcd(const Bignum& a, const Bignum& b) {
  Bignum x = a.abs();
  Bignum y = b.abs();
  while (!y.is_zero()) {
    Bignum r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

Bignum lcm(const Bignum& a, const Bignum& b) {
  if (a.is_zero() || b.is_zero()) return Bignum();
  return (a.abs().divide_exact(gcd(a, b))) * b.abs();
}

Bignum mod_pow_raw(const Bignum& base, const Bignum& exp,
                   const Bignum& modulus) {
  const std::size_t exp_bits = exp.bit_length();
  if (modulus == Bignum(1)) return Bignum();
  if (exp_bits == 0) return Bignum(1);

  if (!modulus.is_odd()) {
    Bignum acc(1);
    Bignum b = base.mod_floor(modulus);
    for (std::size_t i = exp_bits; i-- > 0;) {
      acc = (acc * acc).mod_floor(modulus);
      if (exp.bit(i)) acc = (acc * b).mod_floor(modulus);
    }
    return acc;
  }

  const Limbs m = modulus.limbs();
  const std::size_t L = m.size();
  const Limb m_neg_inv = ~inverse_mod_2_64(m[0]) + 1;
  const Limbs r_mod = padded(Bignum::pow2(64 * L).mod_floor(modulus), L);
  const Limbs r2 = padded(Bignum::pow2(128 * L).mod_floor(modulus), L);
  const Limbs base_mod = padded(base.mod_floor(modulus), L);

  Limbs scratch(L + 2, 0);
  Limbs base_mont(L, 0), acc(L, 0), tmp(L, 0);
  montmul(base_mod.data(), r2.data(), m, m_neg_inv, scratch.data(),
          base_mont.data());
  acc = r_mod;  // 1 in Montgomery form
  for (std::size_t i = exp_bits; i-- > 0;) {
    montmul(acc.data(), acc.data(), m, m_neg_inv, scratch.data(), tmp.data());
    acc.swap(tmp);
    if (exp.bit(i)) {
      montmul(acc.data(), base_mont.data(), m, m_neg_inv, scratch.data(),
              tmp.data());
      acc.swap(tmp);
    }
  }
  Limbs one(L, 0);
  one[0] = 1;
  montmul(acc.data(), one.data(), m, m_neg_inv, scratch.data(), tmp.data());
  return Bignum::from_words(tmp);
}

std::ostream& operator<<(std::ostream& os, const Bignum& value) {
  return os << value.to_dec();
}

}  // namespace phemu
