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

// Exercises the shared-library surface only: phemu.h, opaque handles,
// status codes and strings. No core headers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>

#include "phemu.h"

namespace {

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  phemu_string_free(s);
  return out;
}

struct Key {
  phemu_key* k = nullptr;
  ~Key() { phemu_key_free(k); }
};

struct Ct {
  phemu_ciphertext* c = nullptr;
  ~Ct() { phemu_ciphertext_free(c); }
};

struct Plan {
  phemu_plan* p = nullptr;
  ~Plan() { phemu_plan_free(p); }
};

struct Table {
  phemu_table* t = nullptr;
  ~Table() { phemu_table_free(t); }
};

const std::uint64_t kSeed1 = 42, kSeed2 = 7;

void make_key(const char* scheme, unsigned bits, std::uint64_t seed, Key& out,
              unsigned k = 12, unsigned i = 128) {
  REQUIRE(phemu_keygen(scheme, bits, k, i, &seed, &out.k) == PHEMU_OK);
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::string(phemu_version()) == "0.1.0");
  CHECK(phemu_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected uniformly") {
  CHECK(phemu_keygen(nullptr, 256, 12, 64, nullptr, nullptr) ==
        PHEMU_ERR_NULL_ARGUMENT);
  CHECK(phemu_plan_build(nullptr, 0, nullptr) == PHEMU_ERR_NULL_ARGUMENT);
  CHECK(phemu_key_from_json(nullptr, nullptr) == PHEMU_ERR_NULL_ARGUMENT);
  CHECK(std::string(phemu_last_error()).find("null argument") !=
        std::string::npos);
}

TEST_CASE("keygen configuration errors") {
  Key key;
  CHECK(phemu_keygen("rsa", 256, 12, 64, &kSeed1, &key.k) == PHEMU_ERR_CONFIG);
  CHECK(phemu_keygen("paillier", 100, 12, 64, &kSeed1, &key.k) ==
        PHEMU_ERR_CONFIG);
  CHECK(std::string(phemu_last_error()).find("256") != std::string::npos);
}

TEST_CASE("key lifecycle: generate, inspect, serialize, reload") {
  Key key;
  make_key("paillier", 256, kSeed1, key, 12, 64);
  char* scheme_raw = nullptr;
  REQUIRE(phemu_key_scheme(key.k, &scheme_raw) == PHEMU_OK);
  CHECK(take(scheme_raw) == "paillier");
  unsigned bits = 0, ck = 0, ci = 0;
  REQUIRE(phemu_key_bits(key.k, &bits) == PHEMU_OK);
  CHECK(bits == 256);
  REQUIRE(phemu_key_codec(key.k, &ck, &ci) == PHEMU_OK);
  CHECK(ck == 12);
  CHECK(ci == 64);
  int has_private = 0;
  REQUIRE(phemu_key_has_private(key.k, &has_private) == PHEMU_OK);
  CHECK(has_private == 1);

  char* fp_raw = nullptr;
  REQUIRE(phemu_key_fingerprint(key.k, &fp_raw) == PHEMU_OK);
  const std::string fp = take(fp_raw);
  CHECK(fp.size() == 64);

  char* json_raw = nullptr;
  REQUIRE(phemu_key_to_json(key.k, 1, &json_raw) == PHEMU_OK);
  const std::string json = take(json_raw);
  Key back;
  REQUIRE(phemu_key_from_json(json.c_str(), &back.k) == PHEMU_OK);
  char* fp2_raw = nullptr;
  REQUIRE(phemu_key_fingerprint(back.k, &fp2_raw) == PHEMU_OK);
  CHECK(take(fp2_raw) == fp);

  // public export drops the private part
  char* pub_raw = nullptr;
  REQUIRE(phemu_key_to_json(key.k, 0, &pub_raw) == PHEMU_OK);
  Key pub;
  REQUIRE(phemu_key_from_json(take(pub_raw).c_str(), &pub.k) == PHEMU_OK);
  REQUIRE(phemu_key_has_private(pub.k, &has_private) == PHEMU_OK);
  CHECK(has_private == 0);
}

TEST_CASE("deterministic keygen under a seed") {
  Key a, b;
  make_key("paillier", 256, 99, a, 12, 64);
  make_key("paillier", 256, 99, b, 12, 64);
  char *ja = nullptr, *jb = nullptr;
  REQUIRE(phemu_key_to_json(a.k, 1, &ja) == PHEMU_OK);
  REQUIRE(phemu_key_to_json(b.k, 1, &jb) == PHEMU_OK);
  CHECK(take(ja) == take(jb));
}

TEST_CASE("encrypt, homomorphic ops, decrypt through handles") {
  Key pk;
  make_key("paillier", 512, kSeed1, pk);
  Ct c2, c3, sum, diff;
  const std::uint64_t s = 5;
  REQUIRE(phemu_encrypt(pk.k, "2", &s, &c2.c) == PHEMU_OK);
  REQUIRE(phemu_encrypt(pk.k, "-3.5", &s, &c3.c) == PHEMU_OK);
  REQUIRE(phemu_paillier_add(pk.k, c2.c, c3.c, &sum.c) == PHEMU_OK);
  REQUIRE(phemu_paillier_sub(pk.k, c2.c, c3.c, &diff.c) == PHEMU_OK);
  char* out = nullptr;
  REQUIRE(phemu_decrypt(pk.k, sum.c, &out, nullptr) == PHEMU_OK);
  CHECK(take(out) == "-1.5");
  char* frac = nullptr;
  REQUIRE(phemu_decrypt(pk.k, diff.c, nullptr, &frac) == PHEMU_OK);
  CHECK(take(frac) == "11/2");

  Ct scaled;
  REQUIRE(phemu_paillier_scalar_mul(pk.k, c2.c, "-4", &scaled.c) == PHEMU_OK);
  REQUIRE(phemu_decrypt(pk.k, scaled.c, &out, nullptr) == PHEMU_OK);
  CHECK(take(out) == "-8");

  Key ek;
  make_key("elgamal", 512, kSeed2, ek);
  Ct e2, e3, prod, quot;
  REQUIRE(phemu_encrypt(ek.k, "2", &s, &e2.c) == PHEMU_OK);
  REQUIRE(phemu_encrypt(ek.k, "-3.5", &s, &e3.c) == PHEMU_OK);
  REQUIRE(phemu_elgamal_mul(ek.k, e2.c, e3.c, &prod.c) == PHEMU_OK);
  REQUIRE(phemu_elgamal_div(ek.k, e2.c, e3.c, &quot.c) == PHEMU_OK);
  REQUIRE(phemu_decrypt(ek.k, prod.c, &out, nullptr) == PHEMU_OK);
  CHECK(take(out) == "-7");
  REQUIRE(phemu_decrypt(ek.k, quot.c, nullptr, &frac) == PHEMU_OK);
  CHECK(take(frac) == "-4/7");

  // scheme confusion is a config error
  Ct bad;
  CHECK(phemu_paillier_add(ek.k, c2.c, c3.c, &bad.c) == PHEMU_ERR_CONFIG);
  CHECK(phemu_elgamal_mul(pk.k, e2.c, e3.c, &bad.c) == PHEMU_ERR_CONFIG);
}

TEST_CASE("ciphertext JSON roundtrip through the C surface") {
  Key pk;
  make_key("paillier", 256, kSeed1, pk, 12, 64);
  Ct ct;
  const std::uint64_t s = 9;
  REQUIRE(phemu_encrypt(pk.k, "12.25", &s, &ct.c) == PHEMU_OK);
  char* json_raw = nullptr;
  REQUIRE(phemu_ciphertext_to_json(ct.c, &json_raw) == PHEMU_OK);
  const std::string json = take(json_raw);
  CHECK(json.find("\"scheme\"") != std::string::npos);
  Ct back;
  REQUIRE(phemu_ciphertext_from_json(json.c_str(), pk.k, &back.c) == PHEMU_OK);
  char* out = nullptr;
  REQUIRE(phemu_decrypt(pk.k, back.c, &out, nullptr) == PHEMU_OK);
  CHECK(take(out) == "12.25");
  // Paillier ciphertexts need their key for codec context
  CHECK(phemu_ciphertext_from_json(json.c_str(), nullptr, &back.c) ==
        PHEMU_ERR_CONFIG);
}

TEST_CASE("plan surface: render, json, counts") {
  Plan plan;
  REQUIRE(phemu_plan_build("(a+b)*(c+d)", 0, &plan.p) == PHEMU_OK);
  char* text_raw = nullptr;
  REQUIRE(phemu_plan_render(plan.p, &text_raw) == PHEMU_OK);
  CHECK(take(text_raw) ==
        "AGENT: Paillier_encrypt a, b, c, d\n"
        "  COMPUTE: Paillier_add a, b -> p\n"
        "  COMPUTE: Paillier_add c, d -> q\n"
        "AGENT: Paillier_decrypt p, q\n"
        "AGENT: ElGamal_encrypt p, q\n"
        "  COMPUTE: ElGamal_multiply p, q -> r\n"
        "AGENT: ElGamal_decrypt r\n");
  char* counts_raw = nullptr;
  REQUIRE(phemu_plan_counts(plan.p, 0, &counts_raw) == PHEMU_OK);
  CHECK(take(counts_raw) ==
        "{\"elgamal_decrypt\":1,\"elgamal_encrypt\":2,\"elgamal_mul\":1,"
        "\"paillier_add\":2,\"paillier_decrypt\":2,\"paillier_encrypt\":4}\n");
  char* json_raw = nullptr;
  REQUIRE(phemu_plan_to_json(plan.p, &json_raw) == PHEMU_OK);
  CHECK(take(json_raw).find("\"actor\"") != std::string::npos);

  Plan bad;
  CHECK(phemu_plan_build("a+", 0, &bad.p) == PHEMU_ERR_PARSE);
  CHECK(std::string(phemu_last_error()).find("position") != std::string::npos);
}

TEST_CASE("eval through the C surface") {
  Key pk, ek;
  make_key("paillier", 512, kSeed1, pk);
  make_key("elgamal", 512, kSeed2, ek);
  char* out = nullptr;
  REQUIRE(phemu_eval("(a+b)*(c+d)", "a=1,b=2,c=3,d=4", pk.k, ek.k, 1, 0,
                     nullptr, &out, nullptr) == PHEMU_OK);
  CHECK(take(out) == "21");
  char* frac = nullptr;
  REQUIRE(phemu_eval("a/b", "a=1,b=3", pk.k, ek.k, 1, 0, nullptr, nullptr,
                     &frac) == PHEMU_OK);
  CHECK(take(frac) == "1/3");

  CHECK(phemu_eval("x+y", "x=1", pk.k, ek.k, 1, 0, nullptr, &out, nullptr) ==
        PHEMU_ERR_UNBOUND_VARIABLE);
  CHECK(phemu_eval("a/b", "a=1,b=0", pk.k, ek.k, 1, 0, nullptr, &out,
                   nullptr) == PHEMU_ERR_DIVISION_BY_ZERO);

  // codec mismatch between the two keys
  Key other;
  make_key("elgamal", 512, kSeed2, other, 10, 128);
  CHECK(phemu_eval("a+b", "a=1,b=2", pk.k, other.k, 1, 0, nullptr, &out,
                   nullptr) == PHEMU_ERR_CONFIG);
  CHECK(std::string(phemu_last_error()).find("codec mismatch") !=
        std::string::npos);
}

TEST_CASE("bench and estimate through the C surface") {
  char* records_raw = nullptr;
  REQUIRE(phemu_bench_run(
              R"({"iterations":2,"repeats":2,"bits":256,"seed":3,
                  "schemes":["plaintext"],"operations":["add","mul"]})",
              &records_raw) == PHEMU_OK);
  const std::string records = take(records_raw);
  char* csv_raw = nullptr;
  REQUIRE(phemu_records_to_csv(records.c_str(), &csv_raw) == PHEMU_OK);
  const std::string csv = take(csv_raw);
  CHECK(csv.find("scheme,operation,key_bits,iterations,repeats,mean_ns,ratio") ==
        0);
  CHECK(csv.find("plaintext,add") != std::string::npos);

  CHECK(phemu_bench_run(R"({"bits":100})", &records_raw) == PHEMU_ERR_CONFIG);
  CHECK(phemu_bench_run("not json", &records_raw) == PHEMU_ERR_CONFIG);

  // synthetic all-equal table: 12 units for the staged example, 8 when
  // sources are pre-encrypted
  const char* table_csv =
      "scheme,operation,key_bits,iterations,repeats,mean_ns,ratio\n"
      "paillier,encrypt,1024,1,1,1000000,\n"
      "paillier,decrypt,1024,1,1,1000000,\n"
      "paillier,add,1024,1,1,1000000,\n"
      "elgamal,encrypt,1024,1,1,1000000,\n"
      "elgamal,decrypt,1024,1,1,1000000,\n"
      "elgamal,mul,1024,1,1,1000000,\n";
  Table table;
  REQUIRE(phemu_table_from_csv(table_csv, "synthetic", &table.t) == PHEMU_OK);
  Plan plan;
  REQUIRE(phemu_plan_build("(a*b)+(c*d)", 0, &plan.p) == PHEMU_OK);
  char* report_raw = nullptr;
  REQUIRE(phemu_estimate(plan.p, table.t, 0, &report_raw) == PHEMU_OK);
  CHECK(take(report_raw).find("\"total_ns\": 12000000.0") != std::string::npos);
  REQUIRE(phemu_estimate(plan.p, table.t, 1, &report_raw) == PHEMU_OK);
  CHECK(take(report_raw).find("\"total_ns\": 8000000.0") != std::string::npos);
}
