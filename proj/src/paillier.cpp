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

#include "paillier.hpp"

#include <algorithm>

#include "errors.hpp"
#include "numtheory.hpp"
#include "sha256.hpp"

namespace phemu {

bool key_bits_supported(unsigned bits) {
  return std::find(std::begin(kSupportedKeyBits), std::end(kSupportedKeyBits),
                   bits) != std::end(kSupportedKeyBits);
}

std::string PaillierPublicKey::compute_fingerprint(const Bignum& n,
                                                   const Bignum& g,
                                                   const CodecParams& codec) {
  return sha256_hex("paillier|" + n.to_hex() + "|" + g.to_hex() + "|" +
                    std::to_string(codec.k) + "|" + std::to_string(codec.i));
}

namespace {

void check_fingerprints(const PaillierPublicKey& key,
                        const PaillierCiphertext& a,
                        const PaillierCiphertext& b) {
  if (a.key_fp != key.fingerprint || b.key_fp != key.fingerprint)
    fail(ErrorCode::KeyMismatch,
         "ciphertexts were not produced under this Paillier key");
}

// Encrypts one sign-encoded component: g^m * r^n mod n^2 with fresh r.
// With g = n + 1, g^m reduces to 1 + m*n mod n^2.
Bignum encrypt_component(const Bignum& m, const PaillierPublicKey& key,
                         RandomSource& rng) {
  if (m >= key.n)
    fail(ErrorCode::Range, "encoded component does not fit below the modulus");
  Bignum r;
  do {
    r = rand_below(key.n - 1, rng) + 1;  // r in [1, n)
  } while (gcd(r, key.n) != Bignum(1));
  const Bignum g_pow = (Bignum(1) + m * key.n).mod_floor(key.n_sq);
  return (g_pow * mod_pow(r, key.n, key.n_sq)).mod_floor(key.n_sq);
}

Bignum decrypt_component(const Bignum& c, const PaillierPublicKey& pub,
                         const PaillierPrivateKey& priv) {
  const Bignum u = mod_pow(c, priv.lambda, pub.n_sq);
  const Bignum l = (u - 1).divide_exact(pub.n);
  return (l * priv.mu).mod_floor(pub.n);
}

void check_headroom(const Bignum& bound, const PaillierPublicKey& key) {
  if (bound >= key.n)
    fail(ErrorCode::Range,
         "plaintext headroom exhausted: the operation chain is too deep for "
         "this key size");
}

}  // namespace

PaillierKeyPair paillier_keygen(unsigned bits, const CodecParams& codec,
                                RandomSource& rng) {
  if (!key_bits_supported(bits))
    fail(ErrorCode::Config,
         "unsupported key size " + std::to_string(bits) +
             "; allowed: 256, 512, 1024, 2048, 3072");
  codec.validate();
  const unsigned half = bits / 2;
  Bignum p = gen_prime(half, rng);
  Bignum q, n;
  int failures = 0;
  while (true) {
    q = gen_prime(half, rng);
    if (q == p) continue;
    n = p * q;
    if (n.bit_length() == bits && gcd(n, (p - 1) * (q - 1)) == Bignum(1))
      break;
    // A p near the bottom of its range can make the exact bit length
    // unreachable for any q; rotate p as well.
    if (++failures % 3 == 0) p = gen_prime(half, rng);
  }
  PaillierKeyPair kp;
  kp.pub.n = n;
  kp.pub.g = n + 1;
  kp.pub.bits = bits;
  kp.pub.codec = codec;
  kp.pub.n_sq = n * n;
  kp.pub.fingerprint =
      PaillierPublicKey::compute_fingerprint(kp.pub.n, kp.pub.g, codec);
  PaillierPrivateKey priv;
  priv.lambda = lcm(p - 1, q - 1);
  priv.mu = mod_inv(priv.lambda, n);
  priv.p = p;
  priv.q = q;
  kp.priv = std::move(priv);
  return kp;
}

PaillierCiphertext paillier_encrypt(const Rational& x,
                                    const PaillierPublicKey& key,
                                    RandomSource& rng) {
  return paillier_encrypt_encoded(encode(x, key.codec), key, rng);
}

PaillierCiphertext paillier_encrypt_encoded(const EncodedRational& value,
                                            const PaillierPublicKey& key,
                                            RandomSource& rng) {
  PaillierCiphertext ct;
  ct.c_num = encrypt_component(value.num, key, rng);
  ct.c_den = encrypt_component(value.den, key, rng);
  ct.key_fp = key.fingerprint;
  ct.den_plain = value.den;
  ct.bound = key.codec.z();
  return ct;
}

Rational paillier_decrypt(const PaillierCiphertext& ct,
                          const PaillierKeyPair& key) {
  if (ct.key_fp != key.pub.fingerprint)
    fail(ErrorCode::KeyMismatch,
         "ciphertext was not produced under this Paillier key");
  if (!key.has_private())
    fail(ErrorCode::Config, "decryption requires the private key");
  const Bignum m_num = decrypt_component(ct.c_num, key.pub, *key.priv);
  const Bignum m_den = decrypt_component(ct.c_den, key.pub, *key.priv);
  return decode_components(m_num, m_den, key.pub.codec);
}

PaillierCiphertext paillier_add(const PaillierPublicKey& key,
                                const PaillierCiphertext& a,
                                const PaillierCiphertext& b) {
  check_fingerprints(key, a, b);
  if (a.den_plain != b.den_plain)
    fail(ErrorCode::DenominatorMismatch,
         "operands carry different denominators; addition requires the "
         "same-denominator form");
  check_headroom(a.bound + b.bound, key);
  PaillierCiphertext out;
  out.c_num = (a.c_num * b.c_num).mod_floor(key.n_sq);
  out.c_den = a.c_den;
  out.key_fp = a.key_fp;
  out.den_plain = a.den_plain;
  out.bound = a.bound + b.bound;
  return out;
}

PaillierCiphertext paillier_sub(const PaillierPublicKey& key,
                                const PaillierCiphertext& a,
                                const PaillierCiphertext& b) {
  check_fingerprints(key, a, b);
  if (a.den_plain != b.den_plain)
    fail(ErrorCode::DenominatorMismatch,
         "operands carry different denominators; subtraction requires the "
         "same-denominator form");
  // Adds the additive inverse plus a correction constant: the inverse
  // alone would negate mod n and lose the mod-z congruence the codec
  // decodes through, so the hidden value is lifted by b's bound rounded
  // up to a multiple of z, keeping it non-negative and z-congruent.
  const Bignum z = key.codec.z();
  const Bignum corr = ((b.bound + z - 1) / z) * z;
  check_headroom(a.bound + corr, key);
  const Bignum g_corr = (Bignum(1) + corr * key.n).mod_floor(key.n_sq);
  PaillierCiphertext out;
  out.c_num = (((a.c_num * mod_inv(b.c_num, key.n_sq)).mod_floor(key.n_sq)) *
               g_corr)
                  .mod_floor(key.n_sq);
  out.c_den = a.c_den;
  out.key_fp = a.key_fp;
  out.den_plain = a.den_plain;
  out.bound = a.bound + corr;
  return out;
}

PaillierCiphertext paillier_scalar_mul(const PaillierPublicKey& key,
                                       const PaillierCiphertext& a,
                                       const Bignum& scalar) {
  if (a.key_fp != key.fingerprint)
    fail(ErrorCode::KeyMismatch,
         "ciphertext was not produced under this Paillier key");
  const Bignum s = sign_encode(scalar, key.codec);
  const Bignum new_bound = s.is_zero() ? Bignum(1) : a.bound * s;
  check_headroom(new_bound, key);
  PaillierCiphertext out;
  out.c_num = mod_pow(a.c_num, s, key.n_sq);
  out.c_den = a.c_den;
  out.key_fp = a.key_fp;
  out.den_plain = a.den_plain;
  out.bound = new_bound;
  return out;
}

nlohmann::json PaillierKeyPair::to_json(bool include_private) const {
  nlohmann::json j{
      {"scheme", "paillier"},
      {"bits", pub.bits},
      {"n", pub.n.to_hex()},
      {"g", pub.g.to_hex()},
      {"codec", {{"k", pub.codec.k}, {"i", pub.codec.i}}},
  };
  if (include_private) {
    if (!has_private())
      fail(ErrorCode::Config, "key pair has no private part to export");
    j["lambda"] = priv->lambda.to_hex();
    j["mu"] = priv->mu.to_hex();
  }
  return j;
}

PaillierKeyPair PaillierKeyPair::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("scheme", "") != "paillier")
    fail(ErrorCode::Config, "not a Paillier key file");
  PaillierKeyPair kp;
  try {
    kp.pub.bits = j.at("bits").get<unsigned>();
    kp.pub.n = Bignum::from_hex(j.at("n").get<std::string>());
    kp.pub.g = Bignum::from_hex(j.at("g").get<std::string>());
    kp.pub.codec.k = j.at("codec").at("k").get<unsigned>();
    kp.pub.codec.i = j.at("codec").at("i").get<unsigned>();
    if (j.contains("lambda") || j.contains("mu")) {
      PaillierPrivateKey priv;
      priv.lambda = Bignum::from_hex(j.at("lambda").get<std::string>());
      priv.mu = Bignum::from_hex(j.at("mu").get<std::string>());
      kp.priv = std::move(priv);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed Paillier key file: ") + e.what());
  }
  kp.pub.codec.validate();
  if (kp.pub.g != kp.pub.n + 1)
    fail(ErrorCode::Config, "Paillier key file violates the g = n + 1 form");
  kp.pub.n_sq = kp.pub.n * kp.pub.n;
  kp.pub.fingerprint = PaillierPublicKey::compute_fingerprint(
      kp.pub.n, kp.pub.g, kp.pub.codec);
  return kp;
}

nlohmann::json PaillierCiphertext::to_json() const {
  return nlohmann::json{{"scheme", "paillier"},
                        {"key_fp", key_fp},
                        {"c_num", c_num.to_hex()},
                        {"c_den", c_den.to_hex()}};
}

PaillierCiphertext PaillierCiphertext::from_json(const nlohmann::json& j,
                                                 const CodecParams& codec) {
  if (!j.is_object() || j.value("scheme", "") != "paillier")
    fail(ErrorCode::Config, "not a Paillier ciphertext");
  PaillierCiphertext ct;
  try {
    ct.key_fp = j.at("key_fp").get<std::string>();
    ct.c_num = Bignum::from_hex(j.at("c_num").get<std::string>());
    ct.c_den = Bignum::from_hex(j.at("c_den").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed Paillier ciphertext: ") + e.what());
  }
  // Serialized ciphertexts are canonical by format: denominator 10^k. The
  // headroom bound is not part of the format; assume a generous z * 2^64
  // so that operation chains over loaded ciphertexts stay safe.
  ct.den_plain = codec.pow10k();
  ct.bound = codec.z() * Bignum::pow2(64);
  return ct;
}

}  // namespace phemu
