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

/// Multiplicative partially homomorphic cryptosystem over sign-encoded
/// rational pairs. Textbook ElGamal over a safe-prime group; the generator
/// spans the prime-order subgroup of quadratic residues.
///
/// Deviations a user must know about:
///  - zero encrypts as c2 = 0, which leaks zero-ness of a plaintext;
///  - messages are used as raw residues, not mapped into the subgroup, so
///    the scheme is not semantically secure in the strict sense.
/// Both are deliberate: the goal is arithmetic completeness of the
/// emulation, not hardened encryption.

struct ElGamalPublicKey {
  Bignum p;  // safe prime
  Bignum g;  // generator of the order-q subgroup, q = (p-1)/2
  Bignum h;  // g^x mod p
  unsigned bits = 0;
  CodecParams codec;
  Bignum q;  // (p-1)/2
  std::string fingerprint;  // digest of (p, g, h, codec)

  static std::string compute_fingerprint(const Bignum& p, const Bignum& g,
                                         const Bignum& h,
                                         const CodecParams& codec);
};

struct ElGamalPrivateKey {
  Bignum x;  // secret exponent in [1, q)
};

struct ElGamalKeyPair {
  ElGamalPublicKey pub;
  std::optional<ElGamalPrivateKey> priv;

  bool has_private() const { return priv.has_value(); }
  nlohmann::json to_json(bool include_private) const;
  static ElGamalKeyPair from_json(const nlohmann::json& j);
};

struct ElGamalComponent {
  Bignum c1;
  Bignum c2;
};

struct ElGamalCiphertext {
  ElGamalComponent num;
  ElGamalComponent den;
  std::string key_fp;

  nlohmann::json to_json() const;
  static ElGamalCiphertext from_json(const nlohmann::json& j);
};

ElGamalKeyPair elgamal_keygen(unsigned bits, const CodecParams& codec,
                              RandomSource& rng);

ElGamalCiphertext elgamal_encrypt(const Rational& x,
                                  const ElGamalPublicKey& key,
                                  RandomSource& rng);

ElGamalCiphertext elgamal_encrypt_encoded(const EncodedRational& value,
                                          const ElGamalPublicKey& key,
                                          RandomSource& rng);

Rational elgamal_decrypt(const ElGamalCiphertext& ct, const ElGamalKeyPair& key);

/// (n1, d1) * (n2, d2) = (n1*n2, d1*d2), componentwise in the ciphertext
/// group.
ElGamalCiphertext elgamal_mul(const ElGamalPublicKey& key,
                              const ElGamalCiphertext& a,
                              const ElGamalCiphertext& b);

/// (n1, d1) / (n2, d2) = (n1*d2, d1*n2): division reduced to
/// multiplication by the numerator/denominator swap. Division by an
/// encrypted zero is undetectable here and surfaces at decode.
ElGamalCiphertext elgamal_div(const ElGamalPublicKey& key,
                              const ElGamalCiphertext& a,
                              const ElGamalCiphertext& b);

}  // namespace phemu
