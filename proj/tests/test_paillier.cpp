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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "errors.hpp"
#include "numtheory.hpp"
#include "paillier.hpp"
#include "sha256.hpp"
#include "testutil.hpp"

using namespace phemu;

TEST_CASE("sha256 known-answer vectors (fingerprint digest)") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // padding boundaries: 55/56 bytes (one vs two tail blocks), 119/120
  CHECK(sha256_hex(std::string(55, 'a')) ==
        "9f4390f8d30c2dd92ec9f095b65e2b9ae9b0a925a5258e241c9f1e910f734318");
  CHECK(sha256_hex(std::string(56, 'a')) ==
        "b35439a4ac6f0948b6d6f9e3c6af0f5f590ce20f1bde7090ef7970686ec6738a");
  CHECK(sha256_hex(std::string(119, 'a')) ==
        "31eba51c313a5c08226adf18d4a359cfdfd8d2e816b13f4af952f7ea6584dcfb");
  CHECK(sha256_hex(std::string(120, 'a')) ==
        "2f3d335432c70b580af0e8e1b3674a7c020d683aa5f73aaaedfdc55af904c21c");
}

namespace {

PaillierKeyPair fixture_key(unsigned bits = 512, std::uint64_t seed = 42,
                            CodecParams codec = CodecParams{}) {
  SeededRng rng(seed);
  return paillier_keygen(bits, codec, rng);
}

Rational dec_str(const char* s) { return Rational::from_decimal_string(s); }

}  // namespace

TEST_CASE("keygen invariants audited against an independent oracle") {
  SeededRng rng(42);
  const PaillierKeyPair kp = paillier_keygen(256, CodecParams{12, 64}, rng);
  REQUIRE(kp.has_private());
  const Bignum& p = kp.priv->p;
  const Bignum& q = kp.priv->q;
  CHECK(p != q);
  CHECK(p.bit_length() == 128);
  CHECK(q.bit_length() == 128);
  CHECK(testutil::independent_miller_rabin(p, 24, 7001));
  CHECK(testutil::independent_miller_rabin(q, 24, 7002));
  CHECK(kp.pub.n == p * q);
  CHECK(kp.pub.n.bit_length() == 256);
  CHECK(kp.pub.g == kp.pub.n + 1);
  CHECK(gcd(kp.pub.n, (p - 1) * (q - 1)) == Bignum(1));
  CHECK(kp.priv->lambda == lcm(p - 1, q - 1));
  CHECK((kp.priv->lambda * kp.priv->mu).mod_floor(kp.pub.n) == Bignum(1));
  // deterministic under the seed
  SeededRng rng2(42);
  CHECK(paillier_keygen(256, CodecParams{12, 64}, rng2).pub.n == kp.pub.n);
}

TEST_CASE("keygen rejects unsupported sizes") {
  SeededRng rng(1);
  for (unsigned bits : {0u, 100u, 384u, 4096u}) {
    try {
      paillier_keygen(bits, CodecParams{}, rng);
      FAIL("expected ConfigError for bits=" << bits);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
    }
  }
}

TEST_CASE("distinct seeds give distinct moduli") {
  CHECK(fixture_key(256, 1, CodecParams{12, 64}).pub.n !=
        fixture_key(256, 2, CodecParams{12, 64}).pub.n);
}

TEST_CASE("roundtrip: decrypt(encrypt(m)) == m for random values") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(77);
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const long whole = static_cast<long>(gen() % 20001) - 10000;
    const Rational m(Bignum(whole), Bignum(100));  // two fractional digits
    CHECK(paillier_decrypt(paillier_encrypt(m, kp.pub, rng), kp) == m);
  }
}

TEST_CASE("roundtrip frozen cases") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(5);
  CHECK(paillier_decrypt(paillier_encrypt(Rational(0), kp.pub, rng), kp) ==
        Rational(0));
  CHECK(paillier_decrypt(paillier_encrypt(Rational(-1), kp.pub, rng), kp) ==
        Rational(-1));
  CHECK(paillier_decrypt(paillier_encrypt(dec_str("7.25"), kp.pub, rng), kp) ==
        dec_str("7.25"));
  CHECK(paillier_decrypt(paillier_encrypt(Rational(-42), kp.pub, rng), kp) ==
        Rational(-42));
}

TEST_CASE("probabilistic encryption: repeated plaintexts differ") {
  const PaillierKeyPair kp = fixture_key(256, 3, CodecParams{12, 64});
  SeededRng rng(9);
  std::set<std::string> seen;
  for (int j = 0; j < 100; ++j)
    seen.insert(paillier_encrypt(Rational(5), kp.pub, rng).c_num.to_hex());
  CHECK(seen.size() == 100);
}

TEST_CASE("L(1) = 0: unit ciphertext component decrypts to zero") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(4);
  PaillierCiphertext ct = paillier_encrypt(Rational(3), kp.pub, rng);
  ct.c_num = Bignum(1);  // g^0 * 1^n
  CHECK(paillier_decrypt(ct, kp) == Rational(0));
}

TEST_CASE("additive homomorphism on frozen examples") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(11);
  auto enc = [&](const Rational& x) {
    return paillier_encrypt(x, kp.pub, rng);
  };
  CHECK(paillier_decrypt(paillier_add(kp.pub, enc(Rational(2)), enc(Rational(3))),
                         kp) == Rational(5));
  CHECK(paillier_decrypt(
            paillier_add(kp.pub, enc(Rational(2)), enc(Rational(-1))), kp) ==
        Rational(1));
  CHECK(paillier_decrypt(paillier_add(kp.pub, enc(dec_str("1.5")),
                                      enc(dec_str("2.25"))),
                         kp) == dec_str("3.75"));
}

TEST_CASE("subtraction, negative differences included") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(13);
  auto enc = [&](long x) { return paillier_encrypt(Rational(x), kp.pub, rng); };
  CHECK(paillier_decrypt(paillier_sub(kp.pub, enc(5), enc(3)), kp) ==
        Rational(2));
  CHECK(paillier_decrypt(paillier_sub(kp.pub, enc(3), enc(5)), kp) ==
        Rational(-2));
  const auto x = enc(37);
  CHECK(paillier_decrypt(paillier_sub(kp.pub, x, x), kp) == Rational(0));
}

TEST_CASE("deeply nested subtraction keeps its headroom") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(15);
  auto enc = [&](long x) { return paillier_encrypt(Rational(x), kp.pub, rng); };
  // a - (b - (c - (d - e))) with negatives: the correction constants must
  // not push the hidden value past n.
  auto chain = paillier_sub(
      kp.pub, enc(1),
      paillier_sub(kp.pub, enc(-2),
                   paillier_sub(kp.pub, enc(3),
                                paillier_sub(kp.pub, enc(-4), enc(5)))));
  CHECK(paillier_decrypt(chain, kp) == Rational(1 - (-2 - (3 - (-4 - 5)))));
}

TEST_CASE("headroom exhaustion raises Range instead of corrupting") {
  // i = 200 on a 512-bit key: a negative scalar multiplies the bound by
  // roughly z = 2^200, so the second application must refuse.
  const PaillierKeyPair kp = fixture_key(512, 43, CodecParams{0, 200});
  SeededRng rng(16);
  auto acc = paillier_encrypt(Rational(1), kp.pub, rng);
  acc = paillier_scalar_mul(kp.pub, acc, Bignum(-1));  // bound ~z^2 < n
  try {
    paillier_scalar_mul(kp.pub, acc, Bignum(-1));  // bound ~z^3 > n
    FAIL("expected Range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Range);
    CHECK(std::string(e.what()).find("headroom") != std::string::npos);
  }
}

TEST_CASE("additive homomorphism property over random 2-digit pairs") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(17);
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const long a = static_cast<long>(gen() % 199) - 99;
    const long b = static_cast<long>(gen() % 199) - 99;
    const auto ca = paillier_encrypt(Rational(a), kp.pub, rng);
    const auto cb = paillier_encrypt(Rational(b), kp.pub, rng);
    CHECK(paillier_decrypt(paillier_add(kp.pub, ca, cb), kp) == Rational(a + b));
    CHECK(paillier_decrypt(paillier_sub(kp.pub, ca, cb), kp) == Rational(a - b));
  }
}

TEST_CASE("scalar multiplication by plaintext constants") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(19);
  auto enc = [&](long x) { return paillier_encrypt(Rational(x), kp.pub, rng); };
  CHECK(paillier_decrypt(paillier_scalar_mul(kp.pub, enc(3), Bignum(4)), kp) ==
        Rational(12));
  CHECK(paillier_decrypt(paillier_scalar_mul(kp.pub, enc(3), Bignum(-1)), kp) ==
        Rational(-3));
  CHECK(paillier_decrypt(paillier_scalar_mul(kp.pub, enc(877), Bignum(1)), kp) ==
        Rational(877));
}

TEST_CASE("scalar out of codec range raises Range") {
  const PaillierKeyPair kp = fixture_key(256, 21, CodecParams{0, 8});
  SeededRng rng(2);
  const auto ct = paillier_encrypt(Rational(3), kp.pub, rng);
  try {
    paillier_scalar_mul(kp.pub, ct, Bignum(128));
    FAIL("expected Range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Range);
  }
}

TEST_CASE("overflow fidelity: 100 + 100 wraps to -56 under an 8-bit codec") {
  const PaillierKeyPair kp = fixture_key(256, 31, CodecParams{0, 8});
  SeededRng rng(3);
  const auto ca = paillier_encrypt(Rational(100), kp.pub, rng);
  const auto cb = paillier_encrypt(Rational(100), kp.pub, rng);
  CHECK(paillier_decrypt(paillier_add(kp.pub, ca, cb), kp) == Rational(-56));
}

TEST_CASE("cross-key operations fail fast with KeyMismatch") {
  const PaillierKeyPair k1 = fixture_key(256, 51, CodecParams{12, 64});
  const PaillierKeyPair k2 = fixture_key(256, 52, CodecParams{12, 64});
  SeededRng rng(6);
  const auto c1 = paillier_encrypt(Rational(1), k1.pub, rng);
  const auto c2 = paillier_encrypt(Rational(2), k2.pub, rng);
  auto expect_mismatch = [&](auto&& fn) {
    try {
      fn();
      FAIL("expected KeyMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::KeyMismatch);
    }
  };
  expect_mismatch([&] { paillier_add(k1.pub, c1, c2); });
  expect_mismatch([&] { paillier_sub(k1.pub, c1, c2); });
  expect_mismatch([&] { paillier_decrypt(c1, k2); });
  expect_mismatch([&] { paillier_scalar_mul(k2.pub, c1, Bignum(2)); });
}

TEST_CASE("denominator provenance mismatch is rejected without decryption") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(8);
  const auto a = paillier_encrypt(Rational(1), kp.pub, rng);
  PaillierCiphertext b = paillier_encrypt(Rational(2), kp.pub, rng);
  b.den_plain = Bignum::pow10(3);  // hand-crafted non-canonical tag
  try {
    paillier_add(kp.pub, a, b);
    FAIL("expected DenominatorMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DenominatorMismatch);
  }
}

TEST_CASE("component must stay below the modulus") {
  // A codec whose window exceeds a 256-bit modulus: the value fits in
  // (-z/2, z/2) but not below n.
  const PaillierKeyPair kp = fixture_key(256, 61, CodecParams{0, 512});
  SeededRng rng(10);
  try {
    paillier_encrypt(Rational(Bignum::pow2(300), Bignum(1)), kp.pub, rng);
    FAIL("expected Range");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Range);
  }
}

TEST_CASE("key JSON roundtrip, private and public exports") {
  const PaillierKeyPair kp = fixture_key(256, 71, CodecParams{12, 64});
  const auto full = kp.to_json(true);
  CHECK(full.at("scheme") == "paillier");
  CHECK(full.contains("lambda"));
  CHECK(full.contains("mu"));
  const PaillierKeyPair back = PaillierKeyPair::from_json(full);
  CHECK(back.pub.n == kp.pub.n);
  CHECK(back.pub.fingerprint == kp.pub.fingerprint);
  CHECK(back.has_private());
  CHECK(back.priv->lambda == kp.priv->lambda);

  const auto pub_only = kp.to_json(false);
  CHECK_FALSE(pub_only.contains("lambda"));
  CHECK_FALSE(pub_only.contains("mu"));
  const PaillierKeyPair pub_back = PaillierKeyPair::from_json(pub_only);
  CHECK_FALSE(pub_back.has_private());
  CHECK(pub_back.pub.fingerprint == kp.pub.fingerprint);

  // loaded private key still decrypts
  SeededRng rng(12);
  const auto ct = paillier_encrypt(dec_str("-3.5"), kp.pub, rng);
  CHECK(paillier_decrypt(ct, back) == dec_str("-3.5"));
  try {
    paillier_decrypt(ct, pub_back);
    FAIL("expected Config (no private part)");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("ciphertext JSON roundtrip") {
  const PaillierKeyPair kp = fixture_key();
  SeededRng rng(14);
  const auto ct = paillier_encrypt(dec_str("12.5"), kp.pub, rng);
  const auto j = ct.to_json();
  CHECK(j.at("scheme") == "paillier");
  const auto back = PaillierCiphertext::from_json(j, kp.pub.codec);
  CHECK(back.c_num == ct.c_num);
  CHECK(back.c_den == ct.c_den);
  CHECK(back.key_fp == ct.key_fp);
  CHECK(back.den_plain == ct.den_plain);
  CHECK(paillier_decrypt(back, kp) == dec_str("12.5"));
}
