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

// phemu command-line front end. Speaks only through the C API in phemu.h;
// all data goes to stdout (or the requested output file), diagnostics to
// stderr. Exit codes: 0 success, 1 usage/configuration error, 2 runtime
// error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phemu.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
  throw CliError{code, message};
}

int exit_code_for(phemu_status status) {
  switch (status) {
    case PHEMU_ERR_CONFIG:
    case PHEMU_ERR_DOMAIN:
    case PHEMU_ERR_PARSE:
    case PHEMU_ERR_MISSING_TABLE_ENTRY:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

void check(phemu_status status, const std::string& context) {
  if (status == PHEMU_OK) return;
  die(exit_code_for(status), context + ": " + phemu_last_error());
}

// Takes ownership of a C-API string.
std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  phemu_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitUsage, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& data, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << data) || !out.flush())
    die(kExitRuntime, "cannot write '" + out_path + "'");
}

struct SeedOption {
  std::optional<std::uint64_t> value;

  // Flag value wins; PHEMU_SEED is the fallback.
  const std::uint64_t* resolve() {
    if (!value) {
      if (const char* env = std::getenv("PHEMU_SEED")) {
        try {
          value = std::stoull(env);
        } catch (const std::exception&) {
          die(kExitUsage, "PHEMU_SEED is not an unsigned integer");
        }
      }
    }
    return value ? &*value : nullptr;
  }
};

struct KeyHandle {
  phemu_key* key = nullptr;
  ~KeyHandle() { phemu_key_free(key); }
};

struct CtHandle {
  phemu_ciphertext* ct = nullptr;
  ~CtHandle() { phemu_ciphertext_free(ct); }
};

struct PlanHandle {
  phemu_plan* plan = nullptr;
  ~PlanHandle() { phemu_plan_free(plan); }
};

struct TableHandle {
  phemu_table* table = nullptr;
  ~TableHandle() { phemu_table_free(table); }
};

void load_key(const std::string& path, KeyHandle& handle) {
  check(phemu_key_from_json(slurp(path).c_str(), &handle.key),
        "loading key '" + path + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

nlohmann::json bench_config_json(int iterations, int repeats, int digits,
                                 unsigned bits, const std::string& ops,
                                 const std::string& schemes,
                                 SeedOption& seed) {
  nlohmann::json config{{"iterations", iterations},
                        {"repeats", repeats},
                        {"digits", digits},
                        {"bits", bits}};
  if (!ops.empty()) config["operations"] = split_list(ops);
  if (!schemes.empty()) config["schemes"] = split_list(schemes);
  if (const std::uint64_t* s = seed.resolve()) config["seed"] = *s;
  return config;
}

void warn_skipped_rows(const std::string& records_json) {
  const auto records = nlohmann::json::parse(records_json);
  for (const auto& rec : records)
    if (rec.value("skipped", false))
      std::cerr << "warning: skipped " << rec.value("scheme", "?") << " "
                << rec.value("operation", "?") << " ("
                << rec.value("note", "unsupported") << ")\n";
}

void emit_bench_outputs(const std::string& records_json,
                        const std::string& csv_path,
                        const std::string& json_path) {
  warn_skipped_rows(records_json);
  char* csv_raw = nullptr;
  check(phemu_records_to_csv(records_json.c_str(), &csv_raw),
        "rendering CSV");
  const std::string csv = take(csv_raw);
  if (!json_path.empty()) emit(records_json, json_path);
  if (!csv_path.empty())
    emit(csv, csv_path);
  else if (json_path.empty())
    emit(csv, "");
}

std::string format_ms(double ns) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ns / 1e6);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"partially homomorphic arithmetic with emulated fully "
               "homomorphic evaluation"};
  app.require_subcommand(1);

  // keygen ---------------------------------------------------------------
  auto* keygen = app.add_subcommand("keygen", "generate a key pair");
  std::string kg_scheme;
  unsigned kg_bits = 1024, kg_k = 12, kg_i = 128;
  SeedOption kg_seed;
  std::string kg_out, kg_public_out;
  keygen->add_option("--scheme", kg_scheme, "paillier or elgamal")->required();
  keygen->add_option("--bits", kg_bits, "key size (256/512/1024/2048/3072)");
  keygen->add_option("--k", kg_k, "decimal scaling exponent (denominator 10^k)");
  keygen->add_option("--i", kg_i, "sign threshold exponent (z = 2^i)");
  keygen->add_option("--seed", kg_seed.value, "deterministic seed");
  keygen->add_option("--out", kg_out, "key file (default: stdout)");
  keygen->add_option("--public-out", kg_public_out,
                     "also write a public-only key file");
  keygen->callback([&] {
    KeyHandle key;
    check(phemu_keygen(kg_scheme.c_str(), kg_bits, kg_k, kg_i,
                       kg_seed.resolve(), &key.key),
          "keygen");
    char* full = nullptr;
    check(phemu_key_to_json(key.key, 1, &full), "serializing key");
    std::string public_json;
    if (!kg_public_out.empty()) {
      char* pub = nullptr;
      check(phemu_key_to_json(key.key, 0, &pub), "serializing public key");
      public_json = take(pub);
    }
    emit(take(full), kg_out);
    if (!kg_public_out.empty()) emit(public_json, kg_public_out);
  });

  // encrypt ----------------------------------------------------------------
  auto* encrypt = app.add_subcommand("encrypt", "encrypt a single value");
  std::string enc_key_path, enc_value, enc_out;
  SeedOption enc_seed;
  encrypt->add_option("--key", enc_key_path, "key file (public part suffices)")
      ->required();
  encrypt->add_option("value", enc_value, "exact decimal, e.g. -12.75")
      ->required();
  encrypt->add_option("--seed", enc_seed.value, "deterministic seed");
  encrypt->add_option("--out", enc_out, "ciphertext file (default: stdout)");
  encrypt->callback([&] {
    KeyHandle key;
    load_key(enc_key_path, key);
    CtHandle ct;
    check(phemu_encrypt(key.key, enc_value.c_str(), enc_seed.resolve(), &ct.ct),
          "encrypt");
    char* json = nullptr;
    check(phemu_ciphertext_to_json(ct.ct, &json), "serializing ciphertext");
    emit(take(json), enc_out);
  });

  // decrypt ----------------------------------------------------------------
  auto* decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext file");
  std::string dec_key_path, dec_in, dec_out;
  bool dec_exact = false;
  decrypt->add_option("--key", dec_key_path, "key file with private part")
      ->required();
  decrypt->add_option("--in", dec_in, "ciphertext file")->required();
  decrypt->add_flag("--exact", dec_exact, "print an exact fraction");
  decrypt->add_option("--out", dec_out, "output file (default: stdout)");
  decrypt->callback([&] {
    KeyHandle key;
    load_key(dec_key_path, key);
    CtHandle ct;
    check(phemu_ciphertext_from_json(slurp(dec_in).c_str(), key.key, &ct.ct),
          "loading ciphertext '" + dec_in + "'");
    char* decimal = nullptr;
    char* fraction = nullptr;
    check(phemu_decrypt(key.key, ct.ct, &decimal, &fraction), "decrypt");
    const std::string dec_s = take(decimal), frac_s = take(fraction);
    emit((dec_exact ? frac_s : dec_s) + "\n", dec_out);
  });

  // plan ---------------------------------------------------------------
  auto* plan_cmd = app.add_subcommand("plan", "show the execution plan");
  std::string plan_expr, plan_out;
  bool plan_json = false, plan_counts = false, plan_scalar = false;
  plan_cmd->add_option("expression", plan_expr, "arithmetic expression")
      ->required();
  plan_cmd->add_flag("--json", plan_json, "emit steps as JSON");
  plan_cmd->add_flag("--counts", plan_counts, "emit operation counts");
  plan_cmd->add_flag("--scalar-mul", plan_scalar,
                     "run integer-constant multiplications as Paillier "
                     "scalar operations");
  plan_cmd->add_option("--out", plan_out, "output file (default: stdout)");
  plan_cmd->callback([&] {
    PlanHandle plan;
    check(phemu_plan_build(plan_expr.c_str(), plan_scalar ? 1 : 0, &plan.plan),
          "building plan");
    std::string data;
    char* raw = nullptr;
    if (plan_counts) {
      check(phemu_plan_counts(plan.plan, 0, &raw), "counting operations");
      data = take(raw);
    } else if (plan_json) {
      check(phemu_plan_to_json(plan.plan, &raw), "rendering plan");
      data = take(raw);
    } else {
      check(phemu_plan_render(plan.plan, &raw), "rendering plan");
      data = take(raw);
    }
    emit(data, plan_out);
  });

  // eval ---------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate an expression under the "
                                          "staged emulation");
  std::string ev_expr, ev_vars, ev_pk_path, ev_ek_path, ev_out;
  bool ev_show_plan = false, ev_checked = false, ev_exact = false,
       ev_scalar = false;
  SeedOption ev_seed;
  eval->add_option("expression", ev_expr, "arithmetic expression")->required();
  eval->add_option("--vars", ev_vars, "comma-separated name=value bindings");
  eval->add_option("--paillier-key", ev_pk_path, "Paillier key file (private)")
      ->required();
  eval->add_option("--elgamal-key", ev_ek_path, "ElGamal key file (private)")
      ->required();
  eval->add_flag("--show-plan", ev_show_plan, "print the plan first");
  eval->add_flag("--checked", ev_checked,
                 "detect overflow instead of wrapping");
  eval->add_flag("--exact", ev_exact, "print an exact fraction");
  eval->add_flag("--scalar-mul", ev_scalar,
                 "run integer-constant multiplications as Paillier scalar "
                 "operations");
  eval->add_option("--seed", ev_seed.value, "deterministic seed");
  eval->add_option("--out", ev_out, "output file (default: stdout)");
  eval->callback([&] {
    KeyHandle pk, ek;
    load_key(ev_pk_path, pk);
    load_key(ev_ek_path, ek);
    std::string data;
    if (ev_show_plan) {
      PlanHandle plan;
      check(phemu_plan_build(ev_expr.c_str(), ev_scalar ? 1 : 0, &plan.plan),
            "building plan");
      char* text = nullptr;
      check(phemu_plan_render(plan.plan, &text), "rendering plan");
      data += take(text);
    }
    char* decimal = nullptr;
    char* fraction = nullptr;
    check(phemu_eval(ev_expr.c_str(), ev_vars.c_str(), pk.key, ek.key,
                     ev_checked ? 1 : 0, ev_scalar ? 1 : 0, ev_seed.resolve(),
                     &decimal, &fraction),
          "eval");
    const std::string dec_s = take(decimal), frac_s = take(fraction);
    data += (ev_exact ? frac_s : dec_s) + "\n";
    emit(data, ev_out);
  });

  // bench ---------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the measurement loops");
  int b_iterations = 1000, b_repeats = 5, b_digits = 2;
  unsigned b_bits = 1024;
  std::string b_ops, b_schemes, b_csv, b_json;
  SeedOption b_seed;
  bench->add_option("--iterations", b_iterations, "operand pairs per repeat");
  bench->add_option("--repeats", b_repeats, "measured repeats");
  bench->add_option("--digits", b_digits, "decimal digits per operand");
  bench->add_option("--bits", b_bits, "key size");
  bench->add_option("--ops", b_ops,
                    "comma list from add,sub,mul,div,encrypt,decrypt,keygen");
  bench->add_option("--schemes", b_schemes,
                    "comma list from plaintext,paillier,elgamal,emulation");
  bench->add_option("--seed", b_seed.value, "deterministic operand seed");
  bench->add_option("--csv", b_csv, "CSV output file (default: stdout)");
  bench->add_option("--json", b_json, "also write full records as JSON");
  bench->callback([&] {
    const auto config = bench_config_json(b_iterations, b_repeats, b_digits,
                                          b_bits, b_ops, b_schemes, b_seed);
    char* records = nullptr;
    check(phemu_bench_run(config.dump().c_str(), &records), "bench");
    emit_bench_outputs(take(records), b_csv, b_json);
  });

  // sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "benchmark across key sizes");
  std::string sw_sizes = "512,1024,2048";
  int sw_iterations = 100, sw_repeats = 5, sw_digits = 2;
  std::string sw_ops, sw_schemes, sw_csv, sw_json;
  SeedOption sw_seed;
  sweep->add_option("--sizes", sw_sizes, "comma list of key sizes");
  sweep->add_option("--iterations", sw_iterations, "operand pairs per repeat");
  sweep->add_option("--repeats", sw_repeats, "measured repeats");
  sweep->add_option("--digits", sw_digits, "decimal digits per operand");
  sweep->add_option("--ops", sw_ops, "operations to include");
  sweep->add_option("--schemes", sw_schemes, "schemes to include");
  sweep->add_option("--seed", sw_seed.value, "deterministic operand seed");
  sweep->add_option("--csv", sw_csv, "CSV output file (default: stdout)");
  sweep->add_option("--json", sw_json, "also write full records as JSON");
  sweep->callback([&] {
    auto config = bench_config_json(sw_iterations, sw_repeats, sw_digits, 512,
                                    sw_ops, sw_schemes, sw_seed);
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& s : split_list(sw_sizes)) {
      try {
        sizes.push_back(std::stoul(s));
      } catch (const std::exception&) {
        die(kExitUsage, "bad key size '" + s + "'");
      }
    }
    config["sizes"] = sizes;
    char* records = nullptr;
    check(phemu_bench_sweep(config.dump().c_str(), &records), "sweep");
    emit_bench_outputs(take(records), sw_csv, sw_json);
  });

  // estimate ----------------------------------------------------------------
  auto* estimate = app.add_subcommand(
      "estimate", "estimate a scenario's cost from a timing table");
  std::string es_expr, es_table, es_out;
  bool es_pre = false, es_scalar = false;
  estimate->add_option("expression", es_expr, "arithmetic expression")
      ->required();
  estimate->add_option("--table", es_table, "timing table CSV")->required();
  estimate->add_flag("--pre-encrypted", es_pre,
                     "assume source values arrive already encrypted");
  estimate->add_flag("--scalar-mul", es_scalar,
                     "plan integer-constant multiplications as Paillier "
                     "scalar operations");
  estimate->add_option("--out", es_out, "output file (default: stdout)");
  estimate->callback([&] {
    PlanHandle plan;
    check(phemu_plan_build(es_expr.c_str(), es_scalar ? 1 : 0, &plan.plan),
          "building plan");
    TableHandle table;
    check(phemu_table_from_csv(slurp(es_table).c_str(), es_table.c_str(),
                               &table.table),
          "loading table '" + es_table + "'");
    char* report_raw = nullptr;
    check(phemu_estimate(plan.plan, table.table, es_pre ? 1 : 0, &report_raw),
          "estimate");
    const auto report = nlohmann::json::parse(take(report_raw));
    std::string data = "counts:\n";
    for (const auto& [action, count] : report.at("counts").items())
      data += "  " + action + ": " + std::to_string(count.get<long>()) + "\n";
    const double total_ns = report.at("total_ns").get<double>();
    char line[96];
    std::snprintf(line, sizeof line, "total: %.0f ns (%s ms)\n", total_ns,
                  format_ms(total_ns).c_str());
    data += line;
    emit(data, es_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
