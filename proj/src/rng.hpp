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

#include <cstdint>
#include <random>

namespace phemu {

/// Injectable randomness source. Instances are stateful and must not be
/// shared across threads.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual std::uint64_t next_u64() = 0;
};

/// Deterministic stream for reproducible key generation and fixtures.
class SeededRng final : public RandomSource {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next_u64() override { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// OS-entropy stream for production use.
class SystemRng final : public RandomSource {
 public:
  std::uint64_t next_u64() override {
    return (static_cast<std::uint64_t>(dev_()) << 32) ^ dev_();
  }

 private:
  std::random_device dev_;
};

}  // namespace phemu
