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

/*
 * phemu: partially homomorphic arithmetic with emulated fully homomorphic
 * evaluation.
 *
 * C interface to the phemu core. All functions return PHEMU_OK on success
 * or an error code; phemu_last_error() describes the most recent failure
 * on the calling thread. Handles are opaque and freed with their matching
 * *_free function. Strings returned through char** out-parameters are
 * heap-allocated and released with phemu_string_free().
 *
 * Values are exact decimals passed as strings ("-12.75"); results come
 * back both as a decimal (truncated to the codec's k fractional digits)
 * and as an exact fraction ("n/d").
 *
 * Seeds: passing a non-null seed pointer selects a deterministic stream
 * (reproducible keys and ciphertexts); null uses OS entropy.
 */

#ifndef PHEMU_H
#define PHEMU_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phemu_status {
  PHEMU_OK = 0,
  PHEMU_ERR_CONFIG = 1,
  PHEMU_ERR_DOMAIN = 2,
  PHEMU_ERR_RANGE = 3,
  PHEMU_ERR_PRECISION = 4,
  PHEMU_ERR_NOT_INVERTIBLE = 5,
  PHEMU_ERR_KEY_MISMATCH = 6,
  PHEMU_ERR_DENOMINATOR_MISMATCH = 7,
  PHEMU_ERR_DIVISION_BY_ZERO = 8,
  PHEMU_ERR_PARSE = 9,
  PHEMU_ERR_UNBOUND_VARIABLE = 10,
  PHEMU_ERR_MISSING_TABLE_ENTRY = 11,
  PHEMU_ERR_IO = 12,
  PHEMU_ERR_NULL_ARGUMENT = 13,
  PHEMU_ERR_INTERNAL = 14
} phemu_status;

/* Mirrors the plan-step action set; REENCRYPT is part of the vocabulary
 * but plans always materialize it as a decrypt + encrypt pair. */
typedef enum phemu_plan_action {
  PHEMU_ACTION_PAILLIER_ENCRYPT = 0,
  PHEMU_ACTION_PAILLIER_DECRYPT = 1,
  PHEMU_ACTION_PAILLIER_ADD = 2,
  PHEMU_ACTION_PAILLIER_SUB = 3,
  PHEMU_ACTION_PAILLIER_SCALAR_MUL = 4,
  PHEMU_ACTION_ELGAMAL_ENCRYPT = 5,
  PHEMU_ACTION_ELGAMAL_DECRYPT = 6,
  PHEMU_ACTION_ELGAMAL_MUL = 7,
  PHEMU_ACTION_ELGAMAL_DIV = 8,
  PHEMU_ACTION_REENCRYPT = 9
} phemu_plan_action;

typedef struct phemu_key phemu_key;
typedef struct phemu_ciphertext phemu_ciphertext;
typedef struct phemu_plan phemu_plan;
typedef struct phemu_table phemu_table;

const char* phemu_version(void);
/* Message for the last failing call on this thread; empty if none. */
const char* phemu_last_error(void);
void phemu_string_free(char* s);

/* --- keys ------------------------------------------------------------- */

/* scheme: "paillier" or "elgamal"; bits: 256/512/1024/2048/3072;
 * codec_k/codec_i: fixed-point codec parameters (10^k denominator,
 * 2^i sign threshold). */
phemu_status phemu_keygen(const char* scheme, unsigned bits, unsigned codec_k,
                          unsigned codec_i, const uint64_t* seed,
                          phemu_key** out);
phemu_status phemu_key_to_json(const phemu_key* key, int include_private,
                               char** json_out);
phemu_status phemu_key_from_json(const char* json, phemu_key** out);
phemu_status phemu_key_scheme(const phemu_key* key, char** out);
phemu_status phemu_key_bits(const phemu_key* key, unsigned* out);
phemu_status phemu_key_codec(const phemu_key* key, unsigned* k_out,
                             unsigned* i_out);
phemu_status phemu_key_fingerprint(const phemu_key* key, char** out);
phemu_status phemu_key_has_private(const phemu_key* key, int* out);
void phemu_key_free(phemu_key* key);

/* --- encryption ------------------------------------------------------- */

phemu_status phemu_encrypt(const phemu_key* key, const char* value,
                           const uint64_t* seed, phemu_ciphertext** out);
/* Either out-parameter may be null. */
phemu_status phemu_decrypt(const phemu_key* key, const phemu_ciphertext* ct,
                           char** decimal_out, char** fraction_out);
phemu_status phemu_ciphertext_to_json(const phemu_ciphertext* ct,
                                      char** json_out);
/* Paillier ciphertexts need their key to restore codec context. For
 * ElGamal ciphertexts `key` may be null. */
phemu_status phemu_ciphertext_from_json(const char* json, const phemu_key* key,
                                        phemu_ciphertext** out);
void phemu_ciphertext_free(phemu_ciphertext* ct);

/* --- homomorphic operations ------------------------------------------ */

phemu_status phemu_paillier_add(const phemu_key* key, const phemu_ciphertext* a,
                                const phemu_ciphertext* b,
                                phemu_ciphertext** out);
phemu_status phemu_paillier_sub(const phemu_key* key, const phemu_ciphertext* a,
                                const phemu_ciphertext* b,
                                phemu_ciphertext** out);
/* scalar is a decimal integer string, negatives allowed. */
phemu_status phemu_paillier_scalar_mul(const phemu_key* key,
                                       const phemu_ciphertext* a,
                                       const char* scalar,
                                       phemu_ciphertext** out);
phemu_status phemu_elgamal_mul(const phemu_key* key, const phemu_ciphertext* a,
                               const phemu_ciphertext* b,
                               phemu_ciphertext** out);
phemu_status phemu_elgamal_div(const phemu_key* key, const phemu_ciphertext* a,
                               const phemu_ciphertext* b,
                               phemu_ciphertext** out);

/* --- expression planning and evaluation ------------------------------- */

phemu_status phemu_plan_build(const char* expression, int enable_scalar_mul,
                              phemu_plan** out);
phemu_status phemu_plan_render(const phemu_plan* plan, char** text_out);
phemu_status phemu_plan_to_json(const phemu_plan* plan, char** json_out);
/* JSON object mapping "scheme_op" to its count, e.g. {"paillier_encrypt":4}.
 * pre_encrypted drops agent encryptions of source values. */
phemu_status phemu_plan_counts(const phemu_plan* plan, int pre_encrypted,
                               char** json_out);
void phemu_plan_free(phemu_plan* plan);

/* bindings: comma-separated "name=decimal" pairs, e.g. "a=1,b=-2.5".
 * Both keys must carry private parts and share codec parameters.
 * checked != 0 detects overflow instead of wrapping. */
phemu_status phemu_eval(const char* expression, const char* bindings,
                        const phemu_key* paillier_key,
                        const phemu_key* elgamal_key, int checked,
                        int enable_scalar_mul, const uint64_t* seed,
                        char** decimal_out, char** fraction_out);

/* --- benchmarking ------------------------------------------------------ */

/* config_json: {"iterations":1000,"repeats":5,"digits":2,"bits":1024,
 *               "seed":42,"operations":[...],"schemes":[...]}; all fields
 * optional. Returns a JSON array of timing records. */
phemu_status phemu_bench_run(const char* config_json, char** records_json_out);
/* Same config plus "sizes":[512,1024,2048]. */
phemu_status phemu_bench_sweep(const char* config_json,
                               char** records_json_out);
phemu_status phemu_records_to_csv(const char* records_json, char** csv_out);

/* Timing table in the benchmark CSV schema
 * (scheme,operation,key_bits,iterations,repeats,mean_ns,ratio). */
phemu_status phemu_table_from_csv(const char* csv, const char* label,
                                  phemu_table** out);
void phemu_table_free(phemu_table* table);
/* Returns {"counts":{...},"total_ns":...}; linear per-operation costing. */
phemu_status phemu_estimate(const phemu_plan* plan, const phemu_table* table,
                            int pre_encrypted, char** report_json_out);

#ifdef __cplusplus
}
#endif

#endif /* PHEMU_H */
