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

#include "phemu.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <variant>

#include "bench.hpp"
#include "elgamal.hpp"
#include "errors.hpp"
#include "paillier.hpp"
#include "plan.hpp"

using namespace phemu;

// Opaque handle definitions. Keys and ciphertexts carry their scheme as a
// variant; the C surface never sees GMP or JSON types.

struct phemu_key {
  std::variant<PaillierKeyPair, ElGamalKeyPair> value;

  bool is_paillier() const {
    return std::holds_alternative<PaillierKeyPair>(value);
  }
  const PaillierKeyPair& paillier() const {
    return std::get<PaillierKeyPair>(value);
  }
  const ElGamalKeyPair& elgamal() const {
    return std::get<ElGamalKeyPair>(value);
  }
};

struct phemu_ciphertext {
  std::variant<PaillierCiphertext, ElGamalCiphertext> value;
  bool is_paillier() const {
    return std::holds_alternative<PaillierCiphertext>(value);
  }
};

struct phemu_plan {
  ExecutionPlan plan;
};

struct phemu_table {
  TimingTable table;
};

namespace {

thread_local std::string g_last_error;

phemu_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Ok: return PHEMU_OK;
    case ErrorCode::Config: return PHEMU_ERR_CONFIG;
    case ErrorCode::Domain: return PHEMU_ERR_DOMAIN;
    case ErrorCode::Range: return PHEMU_ERR_RANGE;
    case ErrorCode::Precision: return PHEMU_ERR_PRECISION;
    case ErrorCode::NotInvertible: return PHEMU_ERR_NOT_INVERTIBLE;
    case ErrorCode::KeyMismatch: return PHEMU_ERR_KEY_MISMATCH;
    case ErrorCode::DenominatorMismatch: return PHEMU_ERR_DENOMINATOR_MISMATCH;
    case ErrorCode::DivisionByZero: return PHEMU_ERR_DIVISION_BY_ZERO;
    case ErrorCode::Parse: return PHEMU_ERR_PARSE;
    case ErrorCode::UnboundVariable: return PHEMU_ERR_UNBOUND_VARIABLE;
    case ErrorCode::MissingTableEntry: return PHEMU_ERR_MISSING_TABLE_ENTRY;
    case ErrorCode::Io: return PHEMU_ERR_IO;
    case ErrorCode::Internal: return PHEMU_ERR_INTERNAL;
  }
  return PHEMU_ERR_INTERNAL;
}

template <typename Fn>
phemu_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PHEMU_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PHEMU_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) fail(ErrorCode::Internal, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::Config, what);
}

// Null argument checks share one path so every entry point reports the
// same way.
#define CHECK_NONNULL(ptr)                                       \
  do {                                                           \
    if ((ptr) == nullptr) {                                      \
      g_last_error = "null argument: " #ptr;                      \
      return PHEMU_ERR_NULL_ARGUMENT;                            \
    }                                                            \
  } while (0)

std::unique_ptr<RandomSource> make_rng(const uint64_t* seed) {
  if (seed != nullptr) return std::make_unique<SeededRng>(*seed);
  return std::make_unique<SystemRng>();
}

std::map<std::string, Rational> parse_bindings(const char* text) {
  std::map<std::string, Rational> out;
  if (text == nullptr) return out;
  const std::string s(text);
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        fail(ErrorCode::Parse,
             "binding '" + item + "' is not of the form name=value");
      out.insert_or_assign(item.substr(0, eq),
                           Rational::from_decimal_string(item.substr(eq + 1)));
    }
    pos = comma + 1;
  }
  return out;
}

const CodecParams& key_codec(const phemu_key& key) {
  return key.is_paillier() ? key.paillier().pub.codec
                           : key.elgamal().pub.codec;
}

nlohmann::json counts_to_json(const OpCounts& counts) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, count] : counts) j[key] = count;
  return j;
}

using PaillierBinFn = PaillierCiphertext (*)(const PaillierPublicKey&,
                                             const PaillierCiphertext&,
                                             const PaillierCiphertext&);
using ElGamalBinFn = ElGamalCiphertext (*)(const ElGamalPublicKey&,
                                           const ElGamalCiphertext&,
                                           const ElGamalCiphertext&);

phemu_status paillier_binop(const phemu_key* key, const phemu_ciphertext* a,
                            const phemu_ciphertext* b, phemu_ciphertext** out,
                            PaillierBinFn fn) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(a);
  CHECK_NONNULL(b);
  CHECK_NONNULL(out);
  return guarded([&] {
    require(key->is_paillier(), "key is not a Paillier key");
    require(a->is_paillier() && b->is_paillier(),
            "operands are not Paillier ciphertexts");
    *out = new phemu_ciphertext{fn(key->paillier().pub,
                                   std::get<PaillierCiphertext>(a->value),
                                   std::get<PaillierCiphertext>(b->value))};
  });
}

phemu_status elgamal_binop(const phemu_key* key, const phemu_ciphertext* a,
                           const phemu_ciphertext* b, phemu_ciphertext** out,
                           ElGamalBinFn fn) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(a);
  CHECK_NONNULL(b);
  CHECK_NONNULL(out);
  return guarded([&] {
    require(!key->is_paillier(), "key is not an ElGamal key");
    require(!a->is_paillier() && !b->is_paillier(),
            "operands are not ElGamal ciphertexts");
    *out = new phemu_ciphertext{fn(key->elgamal().pub,
                                   std::get<ElGamalCiphertext>(a->value),
                                   std::get<ElGamalCiphertext>(b->value))};
  });
}

}  // namespace

extern "C" {

const char* phemu_version(void) { return "0.1.0"; }

const char* phemu_last_error(void) { return g_last_error.c_str(); }

void phemu_string_free(char* s) { std::free(s); }

phemu_status phemu_keygen(const char* scheme, unsigned bits, unsigned codec_k,
                          unsigned codec_i, const uint64_t* seed,
                          phemu_key** out) {
  CHECK_NONNULL(scheme);
  CHECK_NONNULL(out);
  return guarded([&] {
    CodecParams codec{codec_k, codec_i};
    codec.validate();
    auto rng = make_rng(seed);
    const std::string name(scheme);
    if (name == "paillier")
      *out = new phemu_key{paillier_keygen(bits, codec, *rng)};
    else if (name == "elgamal")
      *out = new phemu_key{elgamal_keygen(bits, codec, *rng)};
    else
      fail(ErrorCode::Config,
           "unknown scheme '" + name + "' (expected paillier or elgamal)");
  });
}

phemu_status phemu_key_to_json(const phemu_key* key, int include_private,
                               char** json_out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(json_out);
  return guarded([&] {
    const nlohmann::json j =
        key->is_paillier() ? key->paillier().to_json(include_private != 0)
                           : key->elgamal().to_json(include_private != 0);
    *json_out = dup_string(j.dump(2) + "\n");
  });
}

phemu_status phemu_key_from_json(const char* json, phemu_key** out) {
  CHECK_NONNULL(json);
  CHECK_NONNULL(out);
  return guarded([&] {
    const nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::Config, "key file is not valid JSON");
    const std::string scheme = j.is_object() ? j.value("scheme", "") : "";
    if (scheme == "paillier")
      *out = new phemu_key{PaillierKeyPair::from_json(j)};
    else if (scheme == "elgamal")
      *out = new phemu_key{ElGamalKeyPair::from_json(j)};
    else
      fail(ErrorCode::Config, "key file does not name a known scheme");
  });
}

phemu_status phemu_key_scheme(const phemu_key* key, char** out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(out);
  return guarded(
      [&] { *out = dup_string(key->is_paillier() ? "paillier" : "elgamal"); });
}

phemu_status phemu_key_bits(const phemu_key* key, unsigned* out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(out);
  return guarded([&] {
    *out = key->is_paillier() ? key->paillier().pub.bits
                              : key->elgamal().pub.bits;
  });
}

phemu_status phemu_key_codec(const phemu_key* key, unsigned* k_out,
                             unsigned* i_out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(k_out);
  CHECK_NONNULL(i_out);
  return guarded([&] {
    const CodecParams& codec = key_codec(*key);
    *k_out = codec.k;
    *i_out = codec.i;
  });
}

phemu_status phemu_key_fingerprint(const phemu_key* key, char** out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(out);
  return guarded([&] {
    *out = dup_string(key->is_paillier() ? key->paillier().pub.fingerprint
                                         : key->elgamal().pub.fingerprint);
  });
}

phemu_status phemu_key_has_private(const phemu_key* key, int* out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(out);
  return guarded([&] {
    *out = (key->is_paillier() ? key->paillier().has_private()
                               : key->elgamal().has_private())
               ? 1
               : 0;
  });
}

void phemu_key_free(phemu_key* key) { delete key; }

phemu_status phemu_encrypt(const phemu_key* key, const char* value,
                           const uint64_t* seed, phemu_ciphertext** out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(value);
  CHECK_NONNULL(out);
  return guarded([&] {
    const Rational x = Rational::from_decimal_string(value);
    auto rng = make_rng(seed);
    if (key->is_paillier())
      *out = new phemu_ciphertext{
          paillier_encrypt(x, key->paillier().pub, *rng)};
    else
      *out =
          new phemu_ciphertext{elgamal_encrypt(x, key->elgamal().pub, *rng)};
  });
}

phemu_status phemu_decrypt(const phemu_key* key, const phemu_ciphertext* ct,
                           char** decimal_out, char** fraction_out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(ct);
  return guarded([&] {
    require(key->is_paillier() == ct->is_paillier(),
            "ciphertext scheme does not match the key scheme");
    const Rational value =
        key->is_paillier()
            ? paillier_decrypt(std::get<PaillierCiphertext>(ct->value),
                               key->paillier())
            : elgamal_decrypt(std::get<ElGamalCiphertext>(ct->value),
                              key->elgamal());
    if (decimal_out != nullptr)
      *decimal_out = dup_string(value.to_decimal_string(key_codec(*key).k));
    if (fraction_out != nullptr)
      *fraction_out = dup_string(value.to_fraction_string());
  });
}

phemu_status phemu_ciphertext_to_json(const phemu_ciphertext* ct,
                                      char** json_out) {
  CHECK_NONNULL(ct);
  CHECK_NONNULL(json_out);
  return guarded([&] {
    const nlohmann::json j =
        ct->is_paillier() ? std::get<PaillierCiphertext>(ct->value).to_json()
                          : std::get<ElGamalCiphertext>(ct->value).to_json();
    *json_out = dup_string(j.dump(2) + "\n");
  });
}

phemu_status phemu_ciphertext_from_json(const char* json, const phemu_key* key,
                                        phemu_ciphertext** out) {
  CHECK_NONNULL(json);
  CHECK_NONNULL(out);
  return guarded([&] {
    const nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
    if (j.is_discarded())
      fail(ErrorCode::Config, "ciphertext is not valid JSON");
    const std::string scheme = j.is_object() ? j.value("scheme", "") : "";
    if (scheme == "paillier") {
      require(key != nullptr,
              "Paillier ciphertexts need their key for codec context");
      require(key->is_paillier(), "key is not a Paillier key");
      *out = new phemu_ciphertext{
          PaillierCiphertext::from_json(j, key->paillier().pub.codec)};
    } else if (scheme == "elgamal") {
      *out = new phemu_ciphertext{ElGamalCiphertext::from_json(j)};
    } else {
      fail(ErrorCode::Config, "ciphertext does not name a known scheme");
    }
  });
}

void phemu_ciphertext_free(phemu_ciphertext* ct) { delete ct; }

phemu_status phemu_paillier_add(const phemu_key* key, const phemu_ciphertext* a,
                                const phemu_ciphertext* b,
                                phemu_ciphertext** out) {
  return paillier_binop(key, a, b, out, &paillier_add);
}

phemu_status phemu_paillier_sub(const phemu_key* key, const phemu_ciphertext* a,
                                const phemu_ciphertext* b,
                                phemu_ciphertext** out) {
  return paillier_binop(key, a, b, out, &paillier_sub);
}

phemu_status phemu_paillier_scalar_mul(const phemu_key* key,
                                       const phemu_ciphertext* a,
                                       const char* scalar,
                                       phemu_ciphertext** out) {
  CHECK_NONNULL(key);
  CHECK_NONNULL(a);
  CHECK_NONNULL(scalar);
  CHECK_NONNULL(out);
  return guarded([&] {
    require(key->is_paillier(), "key is not a Paillier key");
    require(a->is_paillier(), "operand is not a Paillier ciphertext");
    *out = new phemu_ciphertext{
        paillier_scalar_mul(key->paillier().pub,
                            std::get<PaillierCiphertext>(a->value),
                            Bignum::from_dec(scalar))};
  });
}

phemu_status phemu_elgamal_mul(const phemu_key* key, const phemu_ciphertext* a,
                               const phemu_ciphertext* b,
                               phemu_ciphertext** out) {
  return elgamal_binop(key, a, b, out, &elgamal_mul);
}

phemu_status phemu_elgamal_div(const phemu_key* key, const phemu_ciphertext* a,
                               const phemu_ciphertext* b,
                               phemu_ciphertext** out) {
  return elgamal_binop(key, a, b, out, &elgamal_div);
}

phemu_status phemu_plan_build(const char* expression, int enable_scalar_mul,
                              phemu_plan** out) {
  CHECK_NONNULL(expression);
  CHECK_NONNULL(out);
  return guarded([&] {
    *out = new phemu_plan{
        build_plan(*parse_expression(expression), enable_scalar_mul != 0)};
  });
}

phemu_status phemu_plan_render(const phemu_plan* plan, char** text_out) {
  CHECK_NONNULL(plan);
  CHECK_NONNULL(text_out);
  return guarded([&] { *text_out = dup_string(render_plan(plan->plan)); });
}

phemu_status phemu_plan_to_json(const phemu_plan* plan, char** json_out) {
  CHECK_NONNULL(plan);
  CHECK_NONNULL(json_out);
  return guarded(
      [&] { *json_out = dup_string(plan_to_json(plan->plan).dump(2) + "\n"); });
}

phemu_status phemu_plan_counts(const phemu_plan* plan, int pre_encrypted,
                               char** json_out) {
  CHECK_NONNULL(plan);
  CHECK_NONNULL(json_out);
  return guarded([&] {
    const OpCounts counts = pre_encrypted != 0
                                ? count_operations_pre_encrypted(plan->plan)
                                : count_operations(plan->plan);
    *json_out = dup_string(counts_to_json(counts).dump() + "\n");
  });
}

void phemu_plan_free(phemu_plan* plan) { delete plan; }

phemu_status phemu_eval(const char* expression, const char* bindings,
                        const phemu_key* paillier_key,
                        const phemu_key* elgamal_key, int checked,
                        int enable_scalar_mul, const uint64_t* seed,
                        char** decimal_out, char** fraction_out) {
  CHECK_NONNULL(expression);
  CHECK_NONNULL(paillier_key);
  CHECK_NONNULL(elgamal_key);
  return guarded([&] {
    require(paillier_key->is_paillier(),
            "--paillier-key does not hold a Paillier key");
    require(!elgamal_key->is_paillier(),
            "--elgamal-key does not hold an ElGamal key");
    const auto plan =
        build_plan(*parse_expression(expression), enable_scalar_mul != 0);
    auto rng = make_rng(seed);
    const Rational result =
        execute_plan(plan, parse_bindings(bindings), paillier_key->paillier(),
                     elgamal_key->elgamal(), *rng, checked != 0);
    if (decimal_out != nullptr)
      *decimal_out = dup_string(
          result.to_decimal_string(paillier_key->paillier().pub.codec.k));
    if (fraction_out != nullptr)
      *fraction_out = dup_string(result.to_fraction_string());
  });
}

phemu_status phemu_bench_run(const char* config_json,
                             char** records_json_out) {
  CHECK_NONNULL(config_json);
  CHECK_NONNULL(records_json_out);
  return guarded([&] {
    const nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
    if (j.is_discarded())
      fail(ErrorCode::Config, "bench config is not valid JSON");
    const auto records = run_benchmark(BenchConfig::from_json(j));
    *records_json_out = dup_string(records_to_json(records).dump(2) + "\n");
  });
}

phemu_status phemu_bench_sweep(const char* config_json,
                               char** records_json_out) {
  CHECK_NONNULL(config_json);
  CHECK_NONNULL(records_json_out);
  return guarded([&] {
    const nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
    if (j.is_discarded())
      fail(ErrorCode::Config, "sweep config is not valid JSON");
    std::vector<unsigned> sizes;
    if (j.contains("sizes")) sizes = j.at("sizes").get<std::vector<unsigned>>();
    const auto records = sweep_key_size(sizes, BenchConfig::from_json(j));
    *records_json_out = dup_string(records_to_json(records).dump(2) + "\n");
  });
}

phemu_status phemu_records_to_csv(const char* records_json, char** csv_out) {
  CHECK_NONNULL(records_json);
  CHECK_NONNULL(csv_out);
  return guarded([&] {
    const nlohmann::json j = nlohmann::json::parse(records_json, nullptr, false);
    if (j.is_discarded())
      fail(ErrorCode::Config, "records payload is not valid JSON");
    *csv_out = dup_string(export_csv(records_from_json(j)));
  });
}

phemu_status phemu_table_from_csv(const char* csv, const char* label,
                                  phemu_table** out) {
  CHECK_NONNULL(csv);
  CHECK_NONNULL(out);
  return guarded([&] {
    *out = new phemu_table{
        table_from_csv(csv, label == nullptr ? "table" : label)};
  });
}

void phemu_table_free(phemu_table* table) { delete table; }

phemu_status phemu_estimate(const phemu_plan* plan, const phemu_table* table,
                            int pre_encrypted, char** report_json_out) {
  CHECK_NONNULL(plan);
  CHECK_NONNULL(table);
  CHECK_NONNULL(report_json_out);
  return guarded([&] {
    const OpCounts counts = pre_encrypted != 0
                                ? count_operations_pre_encrypted(plan->plan)
                                : count_operations(plan->plan);
    const double total = estimate_scenario_cost(counts, table->table);
    nlohmann::json report{{"counts", counts_to_json(counts)},
                          {"total_ns", total},
                          {"source", table->table.source}};
    *report_json_out = dup_string(report.dump(2) + "\n");
  });
}

}  // extern "C"
