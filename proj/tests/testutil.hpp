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

// Test-only oracles and validators. These deliberately avoid the library's
// own fast code paths: the modular exponentiation here is a repeated-
// multiply / square-and-multiply loop over plain multiply-and-reduce
// (never the Montgomery ladder), the primality re-verification is an
// independent Miller-Rabin, and the plan interpreter evaluates plans over
// exact rationals with no cryptography.

#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bignum.hpp"
#include "codec.hpp"
#include "expr.hpp"
#include "plan.hpp"
#include "rational.hpp"

namespace testutil {

using phemu::Bignum;
using phemu::CodecParams;
using phemu::Rational;

// Oracle for mod_pow on small inputs: literal repeated multiplication.
inline std::uint64_t repeated_mul_pow(std::uint64_t base, std::uint64_t exp,
                                      std::uint64_t modulus) {
  std::uint64_t acc = 1 % modulus;
  for (std::uint64_t j = 0; j < exp; ++j) acc = acc * (base % modulus) % modulus;
  return acc;
}

// Oracle for mod_inv: exhaustive search over residues.
inline std::optional<std::uint64_t> exhaustive_inverse(std::uint64_t a,
                                                       std::uint64_t m) {
  for (std::uint64_t b = 0; b < m; ++b)
    if (a % m * b % m == 1) return b;
  return std::nullopt;
}

// Trial division, complete for n < bound^2.
inline bool trial_division_prime(const Bignum& n, std::uint64_t bound) {
  if (n < Bignum(2)) return false;
  for (std::uint64_t d = 2; d < bound; ++d) {
    if (Bignum(static_cast<unsigned long>(d)) * Bignum(static_cast<unsigned long>(d)) > n)
      break;
    if (n.mod_u64(d) == 0) return n == Bignum(static_cast<unsigned long>(d));
  }
  return true;
}

// Square-and-multiply over plain multiply + reduce, independent of the
// library's Montgomery path.
inline Bignum slow_mod_pow(const Bignum& base, const Bignum& exp,
                           const Bignum& modulus) {
  Bignum acc(1);
  acc = acc.mod_floor(modulus);
  Bignum b = base.mod_floor(modulus);
  for (std::size_t bit = exp.bit_length(); bit-- > 0;) {
    acc = (acc * acc).mod_floor(modulus);
    if (exp.bit(bit)) acc = (acc * b).mod_floor(modulus);
  }
  return acc;
}

// Independent Miller-Rabin re-verification with fresh deterministic bases.
inline bool independent_miller_rabin(const Bignum& n, int rounds,
                                     std::uint64_t seed) {
  if (n < Bignum(2)) return false;
  if (n == Bignum(2) || n == Bignum(3)) return true;
  if (!n.is_odd()) return false;
  const Bignum n_minus_1 = n - 1;
  Bignum d = n_minus_1;
  unsigned s = 0;
  while (!d.is_odd()) {
    d = d / 2;
    ++s;
  }
  std::mt19937_64 gen(seed);
  for (int round = 0; round < rounds; ++round) {
    // Base from a 64-bit draw, folded into [2, n-2].
    Bignum a = (Bignum(static_cast<long long>(gen() >> 1)).mod_floor(n - 3)) + 2;
    Bignum x = slow_mod_pow(a, d, n);
    if (x == Bignum(1) || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned j = 1; j < s; ++j) {
      x = (x * x).mod_floor(n);
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// ---------------------------------------------------------------------
// Independent plan validator: def-before-use, actor/action separation,
// scheme consistency. Knows nothing about how plans are built.

inline bool validate_plan(const phemu::ExecutionPlan& plan,
                          std::string* why = nullptr) {
  using phemu::Actor;
  using phemu::PlanAction;
  using phemu::Scheme;
  auto report = [&](const std::string& message) {
    if (why != nullptr) *why = message;
    return false;
  };

  std::set<std::string> sources(plan.variables.begin(), plan.variables.end());
  for (const auto& [id, value] : plan.literals) sources.insert(id);

  std::set<std::string> plain_available = sources;
  std::map<std::string, std::set<Scheme>> encrypted;
  std::set<std::string> defined;

  for (std::size_t idx = 0; idx < plan.steps.size(); ++idx) {
    const auto& step = plan.steps[idx];
    const Scheme scheme = phemu::action_scheme(step.action);
    const std::string where = "step " + std::to_string(idx + 1);
    switch (step.action) {
      case PlanAction::Reencrypt:
        return report(where + ": Reencrypt must not be materialized");
      case PlanAction::PaillierEncrypt:
      case PlanAction::ElGamalEncrypt:
        if (step.actor != Actor::Agent)
          return report(where + ": encrypt outside the agent");
        if (step.output) return report(where + ": encrypt has an output id");
        if (step.inputs.empty()) return report(where + ": empty encrypt");
        for (const auto& id : step.inputs) {
          if (!plain_available.count(id))
            return report(where + ": encrypts '" + id +
                          "' before its plaintext exists");
          encrypted[id].insert(scheme);
        }
        break;
      case PlanAction::PaillierDecrypt:
      case PlanAction::ElGamalDecrypt:
        if (step.actor != Actor::Agent)
          return report(where + ": decrypt outside the agent");
        if (step.output) return report(where + ": decrypt has an output id");
        if (step.inputs.empty()) return report(where + ": empty decrypt");
        for (const auto& id : step.inputs) {
          if (!encrypted.count(id) || !encrypted[id].count(scheme))
            return report(where + ": decrypts '" + id +
                          "' which is not encrypted under that scheme");
          plain_available.insert(id);
        }
        break;
      default: {  // compute operations
        if (step.actor != Actor::Compute)
          return report(where + ": homomorphic op outside the compute engine");
        if (!step.output) return report(where + ": compute without output");
        if (step.inputs.size() != 2)
          return report(where + ": compute arity != 2");
        if (defined.count(*step.output) || sources.count(*step.output))
          return report(where + ": redefines '" + *step.output + "'");
        const bool scalar = step.action == PlanAction::PaillierScalarMul;
        for (std::size_t a = 0; a < step.inputs.size(); ++a) {
          const auto& id = step.inputs[a];
          if (scalar && a == 1) {
            if (!plan.literals.count(id))
              return report(where + ": scalar operand '" + id +
                            "' is not a literal");
            continue;
          }
          if (!encrypted.count(id) || !encrypted[id].count(scheme))
            return report(where + ": consumes '" + id +
                          "' not encrypted under the step scheme");
        }
        defined.insert(*step.output);
        encrypted[*step.output].insert(scheme);
        break;
      }
    }
  }
  if (!plain_available.count(plan.root_id))
    return report("root '" + plan.root_id + "' never decrypted");
  return true;
}

// ---------------------------------------------------------------------
// Plaintext interpreter over a plan: exact rational arithmetic plus the
// agent's truncation rule at re-encryption boundaries. Tracks the true
// (unwrapped) encoded numerator/denominator magnitudes and refuses plans
// whose values leave the representable window, so callers can filter the
// random-expression corpus to the spec's "intermediates within range".

struct InterpResult {
  std::optional<Rational> value;  // empty: overflow or division by zero
  bool truncation_lossy = false;  // some quotient lost digits at a boundary
  std::string reject_reason;
};

inline InterpResult interpret_plan_plain(
    const phemu::ExecutionPlan& plan,
    const std::map<std::string, Rational>& bindings,
    const CodecParams& codec) {
  using phemu::PlanAction;
  InterpResult result;
  struct Pair {
    Bignum num;
    Bignum den;
  };
  std::map<std::string, Rational> plain;
  std::map<std::string, Pair> enc;  // true encoded pairs, any scheme
  std::set<std::string> sources(plan.variables.begin(), plan.variables.end());
  for (const auto& [id, v] : plan.literals) {
    plain.emplace(id, v);
    sources.insert(id);
  }
  for (const auto& name : plan.variables) {
    const auto it = bindings.find(name);
    if (it == bindings.end()) {
      result.reject_reason = "unbound " + name;
      return result;
    }
    plain.insert_or_assign(name, it->second);
  }

  const Bignum half = codec.half_z();
  const Bignum ten_k = codec.pow10k();
  auto reject = [&](const std::string& why) {
    result.value.reset();
    result.reject_reason = why;
    return result;
  };

  for (const auto& step : plan.steps) {
    switch (step.action) {
      case PlanAction::PaillierEncrypt:
      case PlanAction::ElGamalEncrypt:
        for (const auto& id : step.inputs) {
          const Rational& v = plain.at(id);
          const Bignum scaled = v.trunc_scaled(codec.k);
          if (!sources.count(id) &&
              Rational(scaled, ten_k) != v)
            result.truncation_lossy = true;
          if (scaled >= half || scaled <= -half)
            return reject("re-encode overflow at " + id);
          enc.insert_or_assign(id, Pair{scaled, ten_k});
        }
        break;
      case PlanAction::PaillierDecrypt:
      case PlanAction::ElGamalDecrypt:
        for (const auto& id : step.inputs) {
          const Pair& p = enc.at(id);
          if (p.den.is_zero()) return reject("division by zero at " + id);
          for (const Bignum* part : {&p.num, &p.den})
            if (*part > half || *part <= -half)
              return reject("overflow at " + id);
          plain.insert_or_assign(id, Rational(p.num, p.den));
        }
        break;
      case PlanAction::PaillierAdd:
      case PlanAction::PaillierSub: {
        const Pair& a = enc.at(step.inputs.at(0));
        const Pair& b = enc.at(step.inputs.at(1));
        if (a.den != b.den) return reject("denominator mismatch");
        enc.insert_or_assign(*step.output,
                             Pair{step.action == PlanAction::PaillierAdd
                                      ? a.num + b.num
                                      : a.num - b.num,
                                  a.den});
        break;
      }
      case PlanAction::PaillierScalarMul: {
        const Pair& a = enc.at(step.inputs.at(0));
        const Rational& s = plan.literals.at(step.inputs.at(1));
        enc.insert_or_assign(*step.output, Pair{a.num * s.num(), a.den});
        break;
      }
      case PlanAction::ElGamalMul: {
        const Pair& a = enc.at(step.inputs.at(0));
        const Pair& b = enc.at(step.inputs.at(1));
        enc.insert_or_assign(*step.output,
                             Pair{a.num * b.num, a.den * b.den});
        break;
      }
      case PlanAction::ElGamalDiv: {
        const Pair& a = enc.at(step.inputs.at(0));
        const Pair& b = enc.at(step.inputs.at(1));
        enc.insert_or_assign(*step.output,
                             Pair{a.num * b.den, a.den * b.num});
        break;
      }
      case PlanAction::Reencrypt:
        return reject("unexpected Reencrypt");
    }
  }
  result.value = plain.at(plan.root_id);
  return result;
}

// ---------------------------------------------------------------------
// Random expression corpus: depth-bounded trees over integer operands in
// [-99, 99], with a pool of variable names bound to random integers.

struct RandomCase {
  std::unique_ptr<phemu::Expr> expr;
  std::map<std::string, Rational> bindings;
};

inline RandomCase random_case(std::mt19937_64& gen, int max_depth) {
  using phemu::BinOp;
  using phemu::Expr;
  static const std::vector<std::string> pool = {"a", "b", "c", "d",
                                                "e", "f", "g", "h"};
  RandomCase out;
  auto rand_value = [&] {
    return Rational(static_cast<long>(gen() % 199) - 99, 1);
  };
  auto build = [&](auto&& self, int depth) -> std::unique_ptr<Expr> {
    const bool leaf = depth >= max_depth || (gen() % 4 == 0);
    if (leaf) {
      if (gen() % 2 == 0) return Expr::make_literal(rand_value());
      const std::string& name = pool[gen() % pool.size()];
      if (!out.bindings.count(name)) out.bindings.emplace(name, rand_value());
      return Expr::make_variable(name);
    }
    const BinOp op = static_cast<BinOp>(gen() % 4);
    return Expr::make_binary(op, self(self, depth + 1), self(self, depth + 1));
  };
  out.expr = build(build, 0);
  return out;
}

}  // namespace testutil
