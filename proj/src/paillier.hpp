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

#include <json.hpp>

#include <optional>
#include <string>

#include "codec.hpp"
#include "rng.hpp"

namespace phemu {

/// Additive partially homomorphic cryptosystem over sign-encoded rational
/// pairs. Simplified-variant generator g = n + 1; decryption via
/// m = L(c^lambda mod n^2) * mu mod n with L(u) = (u - 1) / n.
///
/// Every ciphertext produced under a key encrypts the canonical
/// denominator 10^k, so addition may combine numerators directly. That
/// rule is enforced through a provenance tag carried on each ciphertext
/// and compared (never decrypted) by add/sub.

struct PaillierPublicKey {
  Bignum n;  // p * q
  Bignum g;  // always n + 1
  unsigned bits = 0;
  CodecParams codec;
  Bignum n_sq;
  std::string fingerprint;  // digest of (n, g, codec)

  static std::string compute_fingerprint(const Bignum& n, const Bignum& g,
                                         const CodecParams& codec);
};

struct PaillierPrivateKey {
  Bignum lambda;  // lcm(p-1, q-1)
  Bignum mu;      // lambda^-1 mod n
  // Retained from generation for invariant auditing; empty on keys loaded
  // from the serialized form, which carries only (lambda, mu).
  Bignum p;
  Bignum q;
};

struct PaillierKeyPair {
  PaillierPublicKey pub;
  std::optional<PaillierPrivateKey> priv;

  bool has_private() const { return priv.has_value(); }
  nlohmann::json to_json(bool include_private) const;
  static PaillierKeyPair from_json(const nlohmann::json& j);
};

struct PaillierCiphertext {
  Bignum c_num;  // residue mod n^2
  Bignum c_den;  // residue mod n^2
  std::string key_fp;
  // Plaintext denominator provenance (public by construction: always 10^k
  // for honestly produced ciphertexts). Compared, not decrypted.
  Bignum den_plain;
  // Public headroom bound on the hidden numerator integer, derived from
  // the operation tree alone (fresh ciphertexts start at z). Subtraction
  // adds a correction constant of this size to stay non-negative mod n,
  // and every operation checks the bound against n so that two's-
  // complement congruence can never silently break.
  Bignum bound;

  nlohmann::json to_json() const;
  static PaillierCiphertext from_json(const nlohmann::json& j,
                                      const CodecParams& codec);
};

inline constexpr unsigned kSupportedKeyBits[] = {256, 512, 1024, 2048, 3072};
bool key_bits_supported(unsigned bits);

PaillierKeyPair paillier_keygen(unsigned bits, const CodecParams& codec,
                                RandomSource& rng);

PaillierCiphertext paillier_encrypt(const Rational& x,
                                    const PaillierPublicKey& key,
                                    RandomSource& rng);

/// Encrypts an already-encoded pair. Used by the re-encryption agent,
/// whose truncation path bypasses strict decimal-precision checks.
PaillierCiphertext paillier_encrypt_encoded(const EncodedRational& value,
                                            const PaillierPublicKey& key,
                                            RandomSource& rng);

Rational paillier_decrypt(const PaillierCiphertext& ct,
                          const PaillierKeyPair& key);

PaillierCiphertext paillier_add(const PaillierPublicKey& key,
                                const PaillierCiphertext& a,
                                const PaillierCiphertext& b);

PaillierCiphertext paillier_sub(const PaillierPublicKey& key,
                                const PaillierCiphertext& a,
                                const PaillierCiphertext& b);

/// Multiplication by a plaintext integer constant.
PaillierCiphertext paillier_scalar_mul(const PaillierPublicKey& key,
                                       const PaillierCiphertext& a,
                                       const Bignum& scalar);

}  // namespace phemu
