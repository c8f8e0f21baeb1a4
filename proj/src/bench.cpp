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

#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "numtheory.hpp"

namespace phemu {

namespace {

constexpr std::uint64_t kCryptoStreamSalt = 0x9e3779b97f4a7c15ULL;

inline void keep(std::int64_t& value) { asm volatile("" : "+r"(value)); }

double mean_of(const std::vector<double>& totals, int iterations) {
  const double sum = std::accumulate(totals.begin(), totals.end(), 0.0);
  return sum / static_cast<double>(totals.size()) /
         static_cast<double>(iterations);
}

template <typename Fn>
std::vector<double> time_repeats(int iterations, int repeats, bool warmup,
                                 Fn&& op) {
  std::vector<double> totals;
  totals.reserve(repeats);
  const int runs = repeats + (warmup ? 1 : 0);
  for (int rep = 0; rep < runs; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < iterations; ++i) op(i);
    const auto stop = std::chrono::steady_clock::now();
    if (warmup && rep == 0) continue;
    totals.push_back(
        std::chrono::duration<double, std::nano>(stop - start).count());
  }
  return totals;
}

// Signed integers with exactly `digits` decimal digits, uniform sign;
// never zero, so that division loops cannot abort.
std::vector<std::int64_t> random_operands(int count, int digits,
                                          RandomSource& rng) {
  std::int64_t lo = 1;
  for (int d = 1; d < digits; ++d) lo *= 10;
  const std::int64_t span = lo * 10 - lo;
  std::vector<std::int64_t> out(count);
  for (auto& v : out) {
    const std::int64_t mag =
        lo + static_cast<std::int64_t>(
                 rand_below(Bignum(static_cast<long>(span)), rng).to_u64());
    v = (rng.next_u64() & 1) ? mag : -mag;
  }
  return out;
}

struct OperandSet {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
};

class BenchSession {
 public:
  BenchSession(const BenchConfig& config, std::uint64_t seed)
      : config_(config),
        operand_rng_(seed),
        crypto_rng_(seed ^ kCryptoStreamSalt) {
    operands_.a = random_operands(config.iterations, config.operand_digits,
                                  operand_rng_);
    operands_.b = random_operands(config.iterations, config.operand_digits,
                                  operand_rng_);
  }

  std::vector<TimingRecord> run();

 private:
  TimingRecord measure(const std::string& scheme, const std::string& op);
  TimingRecord plaintext_record(const std::string& op);
  std::vector<double> plaintext_totals(const std::string& op, int iterations);
  double plaintext_mean(const std::string& op);
  TimingRecord paillier_record(const std::string& op);
  TimingRecord elgamal_record(const std::string& op);
  TimingRecord emulation_record(const std::string& op);

  const PaillierKeyPair& paillier_key();
  const ElGamalKeyPair& elgamal_key();

  TimingRecord base_record(const std::string& scheme, const std::string& op,
                           int iterations) const;
  void attach_ratio(TimingRecord& rec);

  BenchConfig config_;
  SeededRng operand_rng_;
  SeededRng crypto_rng_;
  OperandSet operands_;
  std::map<std::string, double> plaintext_means_;
  std::optional<PaillierKeyPair> paillier_key_;
  std::optional<ElGamalKeyPair> elgamal_key_;
};

const PaillierKeyPair& BenchSession::paillier_key() {
  if (!paillier_key_)
    paillier_key_ = paillier_keygen(config_.key_bits, CodecParams{}, crypto_rng_);
  return *paillier_key_;
}

const ElGamalKeyPair& BenchSession::elgamal_key() {
  if (!elgamal_key_)
    elgamal_key_ = elgamal_keygen(config_.key_bits, CodecParams{}, crypto_rng_);
  return *elgamal_key_;
}

TimingRecord BenchSession::base_record(const std::string& scheme,
                                       const std::string& op,
                                       int iterations) const {
  TimingRecord rec;
  rec.scheme = scheme;
  rec.operation = op;
  rec.key_bits = scheme == "plaintext" ? 0 : config_.key_bits;
  rec.iterations = iterations;
  rec.repeats = config_.repeats;
  return rec;
}

std::vector<double> BenchSession::plaintext_totals(const std::string& op,
                                                   int iterations) {
  const std::vector<std::int64_t> a =
      iterations <= config_.iterations
          ? operands_.a
          : [&] {
              SeededRng extended(config_.seed.value_or(0) + 1);
              return random_operands(iterations, config_.operand_digits,
                                     extended);
            }();
  const std::vector<std::int64_t> b =
      iterations <= config_.iterations
          ? operands_.b
          : [&] {
              SeededRng extended(config_.seed.value_or(0) + 2);
              return random_operands(iterations, config_.operand_digits,
                                     extended);
            }();
  auto loop = [&](auto&& body) {
    return time_repeats(iterations, config_.repeats, config_.warmup, body);
  };
  if (op == "add")
    return loop([&](int i) {
      std::int64_t r = a[i] + b[i];
      keep(r);
    });
  if (op == "sub")
    return loop([&](int i) {
      std::int64_t r = a[i] - b[i];
      keep(r);
    });
  if (op == "mul")
    return loop([&](int i) {
      std::int64_t r = a[i] * b[i];
      keep(r);
    });
  return loop([&](int i) {
    std::int64_t r = a[i] / b[i];
    keep(r);
  });
}

double BenchSession::plaintext_mean(const std::string& op) {
  const auto it = plaintext_means_.find(op);
  if (it != plaintext_means_.end()) return it->second;
  // Sub-nanosecond operations need a long loop for the per-op figure to
  // mean anything; the baseline always runs at least the standard 1000
  // iterations so that ratios stay clock-overhead-free even when the
  // homomorphic loops are configured short.
  const int iterations = std::max(config_.iterations, 1000);
  const double mean = mean_of(plaintext_totals(op, iterations), iterations);
  plaintext_means_[op] = mean;
  return mean;
}

TimingRecord BenchSession::plaintext_record(const std::string& op) {
  TimingRecord rec = base_record("plaintext", op, config_.iterations);
  rec.repeat_total_ns = plaintext_totals(op, config_.iterations);
  rec.mean_ns = mean_of(rec.repeat_total_ns, rec.iterations);
  rec.ratio = 1.0;
  return rec;
}

TimingRecord BenchSession::paillier_record(const std::string& op) {
  const PaillierKeyPair& kp = paillier_key();
  const PaillierPublicKey& pub = kp.pub;
  const int n = config_.iterations;

  if (op == "keygen") {
    TimingRecord rec = base_record("paillier", op, 1);
    rec.note = "one key generation per repeat";
    rec.repeat_total_ns =
        time_repeats(1, config_.repeats, config_.warmup, [&](int) {
          paillier_keygen(config_.key_bits, CodecParams{}, crypto_rng_);
        });
    rec.mean_ns = mean_of(rec.repeat_total_ns, 1);
    return rec;
  }

  TimingRecord rec = base_record("paillier", op, n);
  if (op == "encrypt") {
    rec.repeat_total_ns =
        time_repeats(n, config_.repeats, config_.warmup, [&](int i) {
          paillier_encrypt(Rational(operands_.a[i]), pub, crypto_rng_);
        });
  } else {
    std::vector<PaillierCiphertext> cta, ctb;
    cta.reserve(n);
    for (int i = 0; i < n; ++i)
      cta.push_back(paillier_encrypt(Rational(operands_.a[i]), pub, crypto_rng_));
    if (op == "add" || op == "sub") {
      ctb.reserve(n);
      for (int i = 0; i < n; ++i)
        ctb.push_back(
            paillier_encrypt(Rational(operands_.b[i]), pub, crypto_rng_));
    }
    if (op == "decrypt")
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { paillier_decrypt(cta[i], kp); });
    else if (op == "add")
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { paillier_add(pub, cta[i], ctb[i]); });
    else if (op == "sub")
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { paillier_sub(pub, cta[i], ctb[i]); });
    else  // mul: by a plaintext constant
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup, [&](int i) {
            paillier_scalar_mul(pub, cta[i], Bignum(static_cast<long>(operands_.b[i])));
          });
    if (op == "mul") rec.note = "multiplication by a plaintext constant";
  }
  rec.mean_ns = mean_of(rec.repeat_total_ns, rec.iterations);
  attach_ratio(rec);
  return rec;
}

TimingRecord BenchSession::elgamal_record(const std::string& op) {
  const ElGamalKeyPair& kp = elgamal_key();
  const ElGamalPublicKey& pub = kp.pub;
  const int n = config_.iterations;

  if (op == "keygen") {
    TimingRecord rec = base_record("elgamal", op, 1);
    rec.note = "one key generation per repeat";
    rec.repeat_total_ns =
        time_repeats(1, config_.repeats, config_.warmup, [&](int) {
          elgamal_keygen(config_.key_bits, CodecParams{}, crypto_rng_);
        });
    rec.mean_ns = mean_of(rec.repeat_total_ns, 1);
    return rec;
  }

  TimingRecord rec = base_record("elgamal", op, n);
  if (op == "encrypt") {
    rec.repeat_total_ns =
        time_repeats(n, config_.repeats, config_.warmup, [&](int i) {
          elgamal_encrypt(Rational(operands_.a[i]), pub, crypto_rng_);
        });
  } else {
    std::vector<ElGamalCiphertext> cta, ctb;
    cta.reserve(n);
    for (int i = 0; i < n; ++i)
      cta.push_back(elgamal_encrypt(Rational(operands_.a[i]), pub, crypto_rng_));
    if (op == "mul" || op == "div") {
      ctb.reserve(n);
      for (int i = 0; i < n; ++i)
        ctb.push_back(
            elgamal_encrypt(Rational(operands_.b[i]), pub, crypto_rng_));
    }
    if (op == "decrypt")
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { elgamal_decrypt(cta[i], kp); });
    else if (op == "mul")
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { elgamal_mul(pub, cta[i], ctb[i]); });
    else
      rec.repeat_total_ns = time_repeats(
          n, config_.repeats, config_.warmup,
          [&](int i) { elgamal_div(pub, cta[i], ctb[i]); });
  }
  rec.mean_ns = mean_of(rec.repeat_total_ns, rec.iterations);
  attach_ratio(rec);
  return rec;
}

TimingRecord BenchSession::emulation_record(const std::string& op) {
  static const std::map<std::string, std::string> exprs = {
      {"add", "a+b"}, {"sub", "a-b"}, {"mul", "a*b"}, {"div", "a/b"}};
  const PaillierKeyPair& pk = paillier_key();
  const ElGamalKeyPair& ek = elgamal_key();
  const ExecutionPlan plan = build_plan(*parse_expression(exprs.at(op)));

  TimingRecord rec = base_record("emulation", op, config_.iterations);
  rec.note = "serialized agent + compute execution, unchecked";
  rec.repeat_total_ns = time_repeats(
      config_.iterations, config_.repeats, config_.warmup, [&](int i) {
        const std::map<std::string, Rational> bindings = {
            {"a", Rational(operands_.a[i])}, {"b", Rational(operands_.b[i])}};
        execute_plan(plan, bindings, pk, ek, crypto_rng_, /*checked=*/false);
      });
  rec.mean_ns = mean_of(rec.repeat_total_ns, rec.iterations);
  attach_ratio(rec);
  return rec;
}

void BenchSession::attach_ratio(TimingRecord& rec) {
  if (rec.operation == "encrypt" || rec.operation == "decrypt" ||
      rec.operation == "keygen")
    return;  // no plaintext counterpart to compare with
  rec.ratio = compute_ratio(rec.mean_ns, plaintext_mean(rec.operation));
}

TimingRecord BenchSession::measure(const std::string& scheme,
                                   const std::string& op) {
  if (scheme == "plaintext") return plaintext_record(op);
  if (scheme == "paillier") return paillier_record(op);
  if (scheme == "elgamal") return elgamal_record(op);
  return emulation_record(op);
}

std::vector<TimingRecord> BenchSession::run() {
  const std::vector<std::string> schemes =
      config_.schemes.empty() ? kDefaultSchemes : config_.schemes;
  const std::vector<std::string> ops =
      config_.operations.empty() ? kAllOperations : config_.operations;

  std::vector<TimingRecord> records;
  for (const std::string scheme : {"plaintext", "paillier", "elgamal",
                                   "emulation"}) {
    if (std::find(schemes.begin(), schemes.end(), scheme) == schemes.end())
      continue;
    for (const std::string& op : kAllOperations) {
      if (std::find(ops.begin(), ops.end(), op) == ops.end()) continue;
      if (!bench_pair_supported(scheme, op)) {
        TimingRecord rec = base_record(scheme, op, 0);
        rec.skipped = true;
        rec.note = scheme + " does not support " + op;
        records.push_back(std::move(rec));
        continue;
      }
      records.push_back(measure(scheme, op));
    }
  }
  return records;
}

}  // namespace

void BenchConfig::validate() const {
  if (iterations < 1) fail(ErrorCode::Config, "iterations must be >= 1");
  if (repeats < 1) fail(ErrorCode::Config, "repeats must be >= 1");
  if (operand_digits < 1 || operand_digits > 9)
    fail(ErrorCode::Config, "operand digits must be in [1, 9]");
  if (!key_bits_supported(key_bits))
    fail(ErrorCode::Config, "unsupported key size " + std::to_string(key_bits));
  for (const auto& s : schemes)
    if (s != "plaintext" && s != "paillier" && s != "elgamal" &&
        s != "emulation")
      fail(ErrorCode::Config, "unknown scheme '" + s + "'");
  for (const auto& o : operations)
    if (std::find(kAllOperations.begin(), kAllOperations.end(), o) ==
        kAllOperations.end())
      fail(ErrorCode::Config, "unknown operation '" + o + "'");
}

bool bench_pair_supported(const std::string& scheme, const std::string& op) {
  if (scheme == "plaintext")
    return op == "add" || op == "sub" || op == "mul" || op == "div";
  if (scheme == "paillier") return op != "div";
  if (scheme == "elgamal") return op != "add" && op != "sub";
  if (scheme == "emulation")
    return op == "add" || op == "sub" || op == "mul" || op == "div";
  return false;
}

std::vector<TimingRecord> run_benchmark(const BenchConfig& config) {
  config.validate();
  std::uint64_t seed;
  if (config.seed) {
    seed = *config.seed;
  } else {
    SystemRng entropy;
    seed = entropy.next_u64();
  }
  return BenchSession(config, seed).run();
}

double compute_ratio(double t_op, double t_plain) {
  if (!(t_plain > 0.0))
    fail(ErrorCode::Domain, "plaintext baseline duration must be positive");
  return t_op / t_plain;
}

std::string format_ratio(double ratio) {
  char buf[40];
  if (ratio >= 1000.0)
    std::snprintf(buf, sizeof buf, "%" PRId64,
                  static_cast<std::int64_t>(std::llround(ratio)));
  else
    std::snprintf(buf, sizeof buf, "%.1f", ratio);
  return buf;
}

std::vector<TimingRecord> sweep_key_size(const std::vector<unsigned>& sizes,
                                         BenchConfig config) {
  if (sizes.empty()) fail(ErrorCode::Config, "no key sizes to sweep");
  std::vector<TimingRecord> out;
  for (unsigned bits : sizes) {
    config.key_bits = bits;
    auto records = run_benchmark(config);
    out.insert(out.end(), std::make_move_iterator(records.begin()),
               std::make_move_iterator(records.end()));
  }
  return out;
}

double estimate_scenario_cost(const OpCounts& counts,
                              const TimingTable& table) {
  double total = 0.0;
  std::string missing;
  for (const auto& [key, count] : counts) {
    if (count == 0) continue;
    const auto split = key.find('_');
    const std::string scheme = key.substr(0, split);
    const std::string op = split == std::string::npos ? "" : key.substr(split + 1);
    const auto it = table.mean_ns.find({scheme, op});
    if (it == table.mean_ns.end()) {
      missing += (missing.empty() ? "" : ", ") + scheme + "." + op;
      continue;
    }
    total += static_cast<double>(count) * it->second;
  }
  if (!missing.empty())
    fail(ErrorCode::MissingTableEntry,
         "timing table is missing entries for: " + missing);
  return total;
}

std::string export_csv(const std::vector<TimingRecord>& records) {
  std::string out = "scheme,operation,key_bits,iterations,repeats,mean_ns,ratio\n";
  for (const auto& rec : records) {
    if (rec.skipped) continue;
    out += rec.scheme + "," + rec.operation + "," +
           std::to_string(rec.key_bits) + "," + std::to_string(rec.iterations) +
           "," + std::to_string(rec.repeats) + "," +
           std::to_string(static_cast<long long>(std::llround(rec.mean_ns))) +
           "," + (rec.ratio ? format_ratio(*rec.ratio) : "") + "\n";
  }
  return out;
}

nlohmann::json TimingRecord::to_json() const {
  nlohmann::json j{
      {"scheme", scheme},
      {"operation", operation},
      {"key_bits", key_bits},
      {"iterations", iterations},
      {"repeats", repeats},
      {"repeat_total_ns", repeat_total_ns},
      {"mean_ns", mean_ns},
      {"skipped", skipped},
      {"note", note},
  };
  j["ratio"] = ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr);
  return j;
}

TimingRecord TimingRecord::from_json(const nlohmann::json& j) {
  TimingRecord rec;
  try {
    rec.scheme = j.at("scheme").get<std::string>();
    rec.operation = j.at("operation").get<std::string>();
    rec.key_bits = j.at("key_bits").get<unsigned>();
    rec.iterations = j.at("iterations").get<int>();
    rec.repeats = j.at("repeats").get<int>();
    rec.repeat_total_ns = j.at("repeat_total_ns").get<std::vector<double>>();
    rec.mean_ns = j.at("mean_ns").get<double>();
    rec.skipped = j.at("skipped").get<bool>();
    rec.note = j.at("note").get<std::string>();
    if (!j.at("ratio").is_null()) rec.ratio = j.at("ratio").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed timing record: ") + e.what());
  }
  return rec;
}

nlohmann::json records_to_json(const std::vector<TimingRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rec : records) arr.push_back(rec.to_json());
  return arr;
}

std::vector<TimingRecord> records_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::Config, "expected a JSON array of records");
  std::vector<TimingRecord> out;
  for (const auto& item : j) out.push_back(TimingRecord::from_json(item));
  return out;
}

nlohmann::json BenchConfig::to_json() const {
  nlohmann::json j{
      {"iterations", iterations}, {"repeats", repeats},
      {"digits", operand_digits}, {"operations", operations},
      {"schemes", schemes},       {"bits", key_bits},
      {"warmup", warmup},
  };
  if (seed) j["seed"] = *seed;
  return j;
}

BenchConfig BenchConfig::from_json(const nlohmann::json& j) {
  BenchConfig config;
  try {
    config.iterations = j.value("iterations", config.iterations);
    config.repeats = j.value("repeats", config.repeats);
    config.operand_digits = j.value("digits", config.operand_digits);
    config.operations = j.value("operations", config.operations);
    config.schemes = j.value("schemes", config.schemes);
    config.key_bits = j.value("bits", config.key_bits);
    config.warmup = j.value("warmup", config.warmup);
    if (j.contains("seed") && !j.at("seed").is_null())
      config.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed bench config: ") + e.what());
  }
  return config;
}

TimingTable table_from_csv(const std::string& csv, const std::string& label) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::Config, "empty timing table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "scheme,operation,key_bits,iterations,repeats,mean_ns,ratio")
    fail(ErrorCode::Config, "unexpected timing table header: '" + line + "'");
  TimingTable table;
  table.source = label;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 7)
      fail(ErrorCode::Config, "timing table line " + std::to_string(line_no) +
                                  " does not have 7 columns");
    double mean = 0.0;
    try {
      mean = std::stod(fields[5]);
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "timing table line " + std::to_string(line_no) +
                                  " has a non-numeric mean_ns");
    }
    if (!(mean > 0.0))
      fail(ErrorCode::Config, "timing table line " + std::to_string(line_no) +
                                  ": durations must be positive");
    const auto key = std::make_pair(fields[0], fields[1]);
    if (!table.mean_ns.emplace(key, mean).second)
      fail(ErrorCode::Config,
           "duplicate timing table entry for " + fields[0] + "." + fields[1] +
               " (filter the CSV to a single key size first)");
  }
  return table;
}

}  // namespace phemu
