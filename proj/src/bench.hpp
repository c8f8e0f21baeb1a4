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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plan.hpp"

namespace phemu {

// Measurement methodology: N random operand pairs per repeat, operands and
// outputs prepared outside the timed region, a monotonic clock around the
// whole operation loop, one discarded warm-up repeat, then the mean over
// the measured repeats. Ratios compare against the plaintext baseline of
// the same arithmetic operation.

struct BenchConfig {
  int iterations = 1000;
  int repeats = 5;
  int operand_digits = 2;
  std::vector<std::string> operations;  // empty = all supported
  std::vector<std::string> schemes;     // empty = plaintext, paillier, elgamal
  unsigned key_bits = 1024;
  std::optional<std::uint64_t> seed;
  bool warmup = true;

  void validate() const;
  nlohmann::json to_json() const;
  static BenchConfig from_json(const nlohmann::json& j);
};

struct TimingRecord {
  std::string scheme;
  std::string operation;
  unsigned key_bits = 0;  // 0 for plaintext rows
  int iterations = 0;
  int repeats = 0;
  std::vector<double> repeat_total_ns;
  double mean_ns = 0.0;           // mean per-operation duration
  std::optional<double> ratio;    // vs plaintext; absent for enc/dec/keygen
  bool skipped = false;
  std::string note;

  nlohmann::json to_json() const;
  static TimingRecord from_json(const nlohmann::json& j);
};

inline const std::vector<std::string> kAllOperations = {
    "add", "sub", "mul", "div", "encrypt", "decrypt", "keygen"};
inline const std::vector<std::string> kDefaultSchemes = {"plaintext",
                                                         "paillier", "elgamal"};

bool bench_pair_supported(const std::string& scheme, const std::string& op);

std::vector<TimingRecord> run_benchmark(const BenchConfig& config);

/// t_op / t_plain. Requires t_plain > 0 (Domain error). Unit-agnostic as
/// long as both sides share one.
double compute_ratio(double t_op, double t_plain);
/// Rounded to the nearest integer at >= 1000, one decimal place below.
std::string format_ratio(double ratio);

/// Full benchmark per key size, records tagged with their size.
std::vector<TimingRecord> sweep_key_size(const std::vector<unsigned>& sizes,
                                         BenchConfig config);

/// Mean per-op durations keyed by (scheme, operation).
struct TimingTable {
  std::map<std::pair<std::string, std::string>, double> mean_ns;
  std::string source;
};

/// Sum of count * mean over all plan operations; strictly linear, no
/// parallelism credit. Missing entries raise MissingTableEntry naming
/// every absent action.
double estimate_scenario_cost(const OpCounts& counts, const TimingTable& table);

/// CSV with the exact columns
/// scheme,operation,key_bits,iterations,repeats,mean_ns,ratio.
/// Skipped records are not data rows. mean_ns is integer nanoseconds.
std::string export_csv(const std::vector<TimingRecord>& records);
/// Lossless JSON array of records.
nlohmann::json records_to_json(const std::vector<TimingRecord>& records);
std::vector<TimingRecord> records_from_json(const nlohmann::json& j);

/// Reads the CSV schema above back as a timing table; durations must be
/// positive and (scheme, operation) pairs unique.
TimingTable table_from_csv(const std::string& csv, const std::string& label);

}  // namespace phemu
