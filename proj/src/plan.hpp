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
#include <unordered_map>
#include <vector>

#include "elgamal.hpp"
#include "expr.hpp"
#include "paillier.hpp"

namespace phemu {

// Staged emulation of fully homomorphic evaluation: a trusted agent holds
// both private keys and converts values between the additive and the
// multiplicative scheme at stage boundaries; the compute engine only ever
// performs homomorphic operations. Execution is strictly serialized in
// plan order.

enum class Actor { Agent, Compute };
enum class Scheme { Paillier, ElGamal };

enum class PlanAction {
  PaillierEncrypt,
  PaillierDecrypt,
  PaillierAdd,
  PaillierSub,
  PaillierScalarMul,  // emitted only when the scalar-mul option is on
  ElGamalEncrypt,
  ElGamalDecrypt,
  ElGamalMul,
  ElGamalDiv,
  // Never emitted: re-encryption is always materialized as an explicit
  // decrypt + encrypt pair.
  Reencrypt,
};

Scheme scheme_for_op(BinOp op);
Scheme action_scheme(PlanAction action);
/// Rendering token, e.g. "Paillier_encrypt", "ElGamal_multiply".
std::string action_display_name(PlanAction action);
/// Canonical (scheme, op) counter key, e.g. "paillier_encrypt",
/// "elgamal_mul". Scalar multiplication counts as "paillier_mul".
std::string action_count_key(PlanAction action);

struct PlanStep {
  Actor actor = Actor::Agent;
  PlanAction action = PlanAction::Reencrypt;
  std::vector<std::string> inputs;
  std::optional<std::string> output;  // COMPUTE steps only
};

struct PlanStage {
  Scheme scheme;
  std::size_t first_step;  // index into ExecutionPlan::steps
};

struct ExecutionPlan {
  std::vector<PlanStep> steps;
  std::vector<PlanStage> stages;
  std::map<std::string, Rational> literals;  // literal id -> exact value
  std::vector<std::string> variables;        // first-appearance order
  std::string root_id;
};

/// Scheme tags per node: {+,-} -> Paillier, {*,/} -> ElGamal; each leaf is
/// tagged with its consuming node's scheme (the root itself for a bare
/// leaf, which defaults to Paillier).
struct SchemeAssignment {
  std::unordered_map<const Expr*, Scheme> binary;
  std::unordered_map<const Expr*, Scheme> leaf;
};
SchemeAssignment assign_schemes(const Expr& root);

/// Builds the staged schedule. Greedy-maximal stages: every ready
/// operation of the stage's scheme runs before the agent re-encrypts the
/// frontier. The first stage takes the scheme of the majority of
/// initially-ready operations, ties to Paillier. Sources are encrypted at
/// first use under each needed scheme; the root is decrypted last.
ExecutionPlan build_plan(const Expr& root, bool enable_scalar_mul = false);

/// Exact multiset of per-value operations: agent steps count once per
/// input id, compute steps once.
using OpCounts = std::map<std::string, long>;
OpCounts count_operations(const ExecutionPlan& plan);
/// Same, minus agent encryptions of source values (they arrive
/// pre-encrypted); re-encryptions of intermediates remain.
OpCounts count_operations_pre_encrypted(const ExecutionPlan& plan);

/// One line per step: `<ACTOR>: <Scheme>_<action> <id>[, <id>...][ -> <id>]`,
/// COMPUTE lines indented two spaces. Deterministic for a given AST.
std::string render_plan(const ExecutionPlan& plan);

/// JSON array of {actor, action, inputs, output}.
nlohmann::json plan_to_json(const ExecutionPlan& plan);

/// Runs the plan with an in-process agent. In checked mode a plaintext
/// shadow of every value detects i-bit overflow at agent decrypt points
/// (Range error); unchecked mode wraps silently like machine arithmetic.
/// Both keys must carry private parts and share codec parameters.
Rational execute_plan(const ExecutionPlan& plan,
                      const std::map<std::string, Rational>& bindings,
                      const PaillierKeyPair& paillier_key,
                      const ElGamalKeyPair& elgamal_key, RandomSource& rng,
                      bool checked);

}  // namespace phemu
