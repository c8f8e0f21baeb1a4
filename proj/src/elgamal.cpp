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

#include "elgamal.hpp"

#include "errors.hpp"
#include "numtheory.hpp"
#include "paillier.hpp"  // key_bits_supported
#include "sha256.hpp"

namespace phemu {

std::string ElGamalPublicKey::compute_fingerprint(const Bignum& p,
                                                  const Bignum& g,
                                                  const Bignum& h,
                                                  const CodecParams& codec) {
  return sha256_hex("elgamal|" + p.to_hex() + "|" + g.to_hex() + "|" +
                    h.to_hex() + "|" + std::to_string(codec.k) + "|" +
                    std::to_string(codec.i));
}

namespace {

void check_fingerprints(const ElGamalPublicKey& key, const ElGamalCiphertext& a,
                        const ElGamalCiphertext& b) {
  if (a.key_fp != key.fingerprint || b.key_fp != key.fingerprint)
    fail(ErrorCode::KeyMismatch,
         "ciphertexts were not produced under this ElGamal key");
}

ElGamalComponent encrypt_component(const Bignum& m,
                                   const ElGamalPublicKey& key,
                                   RandomSource& rng) {
  if (m >= key.p)
    fail(ErrorCode::Range, "encoded component does not fit below the modulus");
  const Bignum r = rand_below(key.q - 1, rng) + 1;  // r in [1, q)
  ElGamalComponent out;
  out.c1 = mod_pow(key.g, r, key.p);
  out.c2 = m.is_zero() ? Bignum(0)
                       : (m * mod_pow(key.h, r, key.p)).mod_floor(key.p);
  return out;
}

Bignum decrypt_component(const ElGamalComponent& c, const ElGamalPublicKey& pub,
                         const ElGamalPrivateKey& priv) {
  if (c.c2.is_zero()) return Bignum(0);
  const Bignum shared = mod_pow(c.c1, priv.x, pub.p);
  return (c.c2 * mod_inv(shared, pub.p)).mod_floor(pub.p);
}

ElGamalComponent mul_components(const ElGamalComponent& a,
                                const ElGamalComponent& b, const Bignum& p) {
  return ElGamalComponent{(a.c1 * b.c1).mod_floor(p),
                          (a.c2 * b.c2).mod_floor(p)};
}

nlohmann::json component_to_json(const ElGamalComponent& c) {
  return nlohmann::json{{"c1", c.c1.to_hex()}, {"c2", c.c2.to_hex()}};
}

ElGamalComponent component_from_json(const nlohmann::json& j) {
  return ElGamalComponent{Bignum::from_hex(j.at("c1").get<std::string>()),
                          Bignum::from_hex(j.at("c2").get<std::string>())};
}

}  // namespace

ElGamalKeyPair elgamal_keygen(unsigned bits, const CodecParams& codec,
                              RandomSource& rng) {
  if (!key_bits_supported(bits))
    fail(ErrorCode::Config,
         "unsupported key size " + std::to_string(bits) +
             "; allowed: 256, 512, 1024, 2048, 3072");
  codec.validate();
  ElGamalKeyPair kp;
  kp.pub.p = gen_safe_prime(bits, rng);
  kp.pub.q = (kp.pub.p - 1).divide_exact(Bignum(2));
  // Square a random element: lands in the order-q subgroup; a in [2, p-2]
  // can never square to 1.
  do {
    const Bignum a = rand_below(kp.pub.p - 3, rng) + 2;
    kp.pub.g = (a * a).mod_floor(kp.pub.p);
  } while (kp.pub.g == Bignum(1));
  ElGamalPrivateKey priv;
  priv.x = rand_below(kp.pub.q - 1, rng) + 1;
  kp.pub.h = mod_pow(kp.pub.g, priv.x, kp.pub.p);
  kp.pub.bits = bits;
  kp.pub.codec = codec;
  kp.pub.fingerprint = ElGamalPublicKey::compute_fingerprint(
      kp.pub.p, kp.pub.g, kp.pub.h, codec);
  kp.priv = std::move(priv);
  return kp;
}

ElGamalCiphertext elgamal_encrypt(const Rational& x,
                                  const ElGamalPublicKey& key,
                                  RandomSource& rng) {
  return elgamal_encrypt_encoded(encode(x, key.codec), key, rng);
}

ElGamalCiphertext elgamal_encrypt_encoded(const EncodedRational& value,
                                          const ElGamalPublicKey& key,
                                          RandomSource& rng) {
  ElGamalCiphertext ct;
  ct.num = encrypt_component(value.num, key, rng);
  ct.den = encrypt_component(value.den, key, rng);
  ct.key_fp = key.fingerprint;
  return ct;
}

Rational elgamal_decrypt(const ElGamalCiphertext& ct,
                         const ElGamalKeyPair& key) {
  if (ct.key_fp != key.pub.fingerprint)
    fail(ErrorCode::KeyMismatch,
         "ciphertext was not produced under this ElGamal key");
  if (!key.has_private())
    fail(ErrorCode::Config, "decryption requires the private key");
  const Bignum m_num = decrypt_component(ct.num, key.pub, *key.priv);
  const Bignum m_den = decrypt_component(ct.den, key.pub, *key.priv);
  return decode_components(m_num, m_den, key.pub.codec);
}

ElGamalCiphertext elgamal_mul(const ElGamalPublicKey& key,
                              const ElGamalCiphertext& a,
                              const ElGamalCiphertext& b) {
  check_fingerprints(key, a, b);
  ElGamalCiphertext out;
  out.num = mul_components(a.num, b.num, key.p);
  out.den = mul_components(a.den, b.den, key.p);
  out.key_fp = a.key_fp;
  return out;
}

ElGamalCiphertext elgamal_div(const ElGamalPublicKey& key,
                              const ElGamalCiphertext& a,
                              const ElGamalCiphertext& b) {
  check_fingerprints(key, a, b);
  ElGamalCiphertext out;
  out.num = mul_components(a.num, b.den, key.p);
  out.den = mul_components(a.den, b.num, key.p);
  out.key_fp = a.key_fp;
  return out;
}

nlohmann::json ElGamalKeyPair::to_json(bool include_private) const {
  nlohmann::json j{
      {"scheme", "elgamal"},
      {"bits", pub.bits},
      {"p", pub.p.to_hex()},
      {"g", pub.g.to_hex()},
      {"h", pub.h.to_hex()},
      {"codec", {{"k", pub.codec.k}, {"i", pub.codec.i}}},
  };
  if (include_private) {
    if (!has_private())
      fail(ErrorCode::Config, "key pair has no private part to export");
    j["x"] = priv->x.to_hex();
  }
  return j;
}

ElGamalKeyPair ElGamalKeyPair::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("scheme", "") != "elgamal")
    fail(ErrorCode::Config, "not an ElGamal key file");
  ElGamalKeyPair kp;
  try {
    kp.pub.bits = j.at("bits").get<unsigned>();
    kp.pub.p = Bignum::from_hex(j.at("p").get<std::string>());
    kp.pub.g = Bignum::from_hex(j.at("g").get<std::string>());
    kp.pub.h = Bignum::from_hex(j.at("h").get<std::string>());
    kp.pub.codec.k = j.at("codec").at("k").get<unsigned>();
    kp.pub.codec.i = j.at("codec").at("i").get<unsigned>();
    if (j.contains("x")) {
      kp.priv = ElGamalPrivateKey{Bignum::from_hex(j.at("x").get<std::string>())};
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed ElGamal key file: ") + e.what());
  }
  kp.pub.codec.validate();
  if (kp.pub.p < Bignum(7) || !kp.pub.p.is_odd())
    fail(ErrorCode::Config, "ElGamal key file carries an invalid modulus");
  kp.pub.q = (kp.pub.p - 1).divide_exact(Bignum(2));
  kp.pub.fingerprint = ElGamalPublicKey::compute_fingerprint(
      kp.pub.p, kp.pub.g, kp.pub.h, kp.pub.codec);
  return kp;
}

nlohmann::json ElGamalCiphertext::to_json() const {
  return nlohmann::json{{"scheme", "elgamal"},
                        {"key_fp", key_fp},
                        {"num", component_to_json(num)},
                        {"den", component_to_json(den)}};
}

ElGamalCiphertext ElGamalCiphertext::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("scheme", "") != "elgamal")
    fail(ErrorCode::Config, "not an ElGamal ciphertext");
  ElGamalCiphertext ct;
  try {
    ct.key_fp = j.at("key_fp").get<std::string>();
    ct.num = component_from_json(j.at("num"));
    ct.den = component_from_json(j.at("den"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed ElGamal ciphertext: ") + e.what());
  }
  return ct;
}

}  // namespace phemu
