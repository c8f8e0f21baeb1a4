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

#include "plan.hpp"

#include <algorithm>
#include <set>

#include "errors.hpp"

namespace phemu {

Scheme scheme_for_op(BinOp op) {
  return (op == BinOp::Add || op == BinOp::Sub) ? Scheme::Paillier
                                                : Scheme::ElGamal;
}

Scheme action_scheme(PlanAction action) {
  switch (action) {
    case PlanAction::PaillierEncrypt:
    case PlanAction::PaillierDecrypt:
    case PlanAction::PaillierAdd:
    case PlanAction::PaillierSub:
    case PlanAction::PaillierScalarMul:
      return Scheme::Paillier;
    default:
      return Scheme::ElGamal;
  }
}

std::string action_display_name(PlanAction action) {
  switch (action) {
    case PlanAction::PaillierEncrypt: return "Paillier_encrypt";
    case PlanAction::PaillierDecrypt: return "Paillier_decrypt";
    case PlanAction::PaillierAdd: return "Paillier_add";
    case PlanAction::PaillierSub: return "Paillier_subtract";
    case PlanAction::PaillierScalarMul: return "Paillier_scalar_mul";
    case PlanAction::ElGamalEncrypt: return "ElGamal_encrypt";
    case PlanAction::ElGamalDecrypt: return "ElGamal_decrypt";
    case PlanAction::ElGamalMul: return "ElGamal_multiply";
    case PlanAction::ElGamalDiv: return "ElGamal_divide";
    case PlanAction::Reencrypt: return "Reencrypt";
  }
  return "?";
}

std::string action_count_key(PlanAction action) {
  switch (action) {
    case PlanAction::PaillierEncrypt: return "paillier_encrypt";
    case PlanAction::PaillierDecrypt: return "paillier_decrypt";
    case PlanAction::PaillierAdd: return "paillier_add";
    case PlanAction::PaillierSub: return "paillier_sub";
    case PlanAction::PaillierScalarMul: return "paillier_mul";
    case PlanAction::ElGamalEncrypt: return "elgamal_encrypt";
    case PlanAction::ElGamalDecrypt: return "elgamal_decrypt";
    case PlanAction::ElGamalMul: return "elgamal_mul";
    case PlanAction::ElGamalDiv: return "elgamal_div";
    case PlanAction::Reencrypt: return "reencrypt";
  }
  return "?";
}

SchemeAssignment assign_schemes(const Expr& root) {
  SchemeAssignment out;
  auto walk = [&](auto&& self, const Expr& e, Scheme consumer) -> void {
    if (e.kind == Expr::Kind::Binary) {
      const Scheme s = scheme_for_op(e.op);
      out.binary[&e] = s;
      self(self, *e.lhs, s);
      self(self, *e.rhs, s);
    } else {
      out.leaf[&e] = consumer;
    }
  };
  walk(walk, root, Scheme::Paillier);
  return out;
}

namespace {

Scheme other(Scheme s) {
  return s == Scheme::Paillier ? Scheme::ElGamal : Scheme::Paillier;
}

PlanAction encrypt_action(Scheme s) {
  return s == Scheme::Paillier ? PlanAction::PaillierEncrypt
                               : PlanAction::ElGamalEncrypt;
}

PlanAction decrypt_action(Scheme s) {
  return s == Scheme::Paillier ? PlanAction::PaillierDecrypt
                               : PlanAction::ElGamalDecrypt;
}

PlanAction compute_action(Scheme s, BinOp op) {
  switch (op) {
    case BinOp::Add: return PlanAction::PaillierAdd;
    case BinOp::Sub: return PlanAction::PaillierSub;
    case BinOp::Mul:
      return s == Scheme::Paillier ? PlanAction::PaillierScalarMul
                                   : PlanAction::ElGamalMul;
    case BinOp::Div: return PlanAction::ElGamalDiv;
  }
  return PlanAction::Reencrypt;
}

struct ChildRef {
  bool is_leaf = true;
  std::string leaf_id;
  std::size_t node = 0;
};

struct BuildNode {
  Scheme scheme = Scheme::Paillier;
  PlanAction action = PlanAction::PaillierAdd;
  ChildRef lhs, rhs;
  bool scalar_rhs = false;  // rhs is a plaintext constant, never encrypted
  std::string out_id;
  bool scheduled = false;
};

struct TreeIndex {
  std::vector<BuildNode> nodes;  // post-order; the root is last
  std::map<std::string, Rational> literals;
  std::vector<std::string> variables;
  std::set<std::string> used_names;
  std::string single_leaf_id;  // set when the AST is a bare leaf
};

TreeIndex index_tree(const Expr& root, bool enable_scalar_mul) {
  TreeIndex idx;
  std::size_t literal_counter = 0;
  std::set<std::string> seen_vars;

  auto leaf_ref = [&](const Expr& e) -> ChildRef {
    if (e.kind == Expr::Kind::Literal) {
      std::string id = "v" + std::to_string(literal_counter++);
      idx.literals.emplace(id, e.literal);
      idx.used_names.insert(id);
      return ChildRef{true, std::move(id), 0};
    }
    if (seen_vars.insert(e.name).second) {
      idx.variables.push_back(e.name);
      idx.used_names.insert(e.name);
    }
    return ChildRef{true, e.name, 0};
  };

  auto is_integer_literal = [](const Expr& e) {
    return e.kind == Expr::Kind::Literal && e.literal.is_integer();
  };

  auto walk = [&](auto&& self, const Expr& e) -> ChildRef {
    if (e.kind != Expr::Kind::Binary) return leaf_ref(e);

    // Scalar-mul option: integer-literal x subtree runs inside a Paillier
    // stage as multiplication by a plaintext constant.
    if (enable_scalar_mul && e.op == BinOp::Mul) {
      const bool lhs_const =
          is_integer_literal(*e.lhs) && e.rhs->kind != Expr::Kind::Literal;
      const bool rhs_const =
          is_integer_literal(*e.rhs) && e.lhs->kind != Expr::Kind::Literal;
      if (lhs_const || rhs_const) {
        const Expr& value_child = lhs_const ? *e.rhs : *e.lhs;
        const Expr& const_child = lhs_const ? *e.lhs : *e.rhs;
        BuildNode node;
        node.lhs = self(self, value_child);
        node.rhs = leaf_ref(const_child);
        node.scheme = Scheme::Paillier;
        node.action = PlanAction::PaillierScalarMul;
        node.scalar_rhs = true;
        idx.nodes.push_back(std::move(node));
        return ChildRef{false, {}, idx.nodes.size() - 1};
      }
    }

    BuildNode node;
    node.lhs = self(self, *e.lhs);
    node.rhs = self(self, *e.rhs);
    node.scheme = scheme_for_op(e.op);
    node.action = compute_action(node.scheme, e.op);
    idx.nodes.push_back(std::move(node));
    return ChildRef{false, {}, idx.nodes.size() - 1};
  };

  const ChildRef root_ref = walk(walk, root);
  if (root_ref.is_leaf) idx.single_leaf_id = root_ref.leaf_id;
  return idx;
}

}  // namespace

ExecutionPlan build_plan(const Expr& root, bool enable_scalar_mul) {
  TreeIndex idx = index_tree(root, enable_scalar_mul);
  ExecutionPlan plan;
  plan.literals = idx.literals;
  plan.variables = idx.variables;

  if (idx.nodes.empty()) {
    plan.stages.push_back({Scheme::Paillier, 0});
    plan.steps.push_back({Actor::Agent, PlanAction::PaillierEncrypt,
                          {idx.single_leaf_id}, std::nullopt});
    plan.steps.push_back({Actor::Agent, PlanAction::PaillierDecrypt,
                          {idx.single_leaf_id}, std::nullopt});
    plan.root_id = idx.single_leaf_id;
    return plan;
  }

  auto alloc_name = [&idx]() {
    for (const char* cand : {"p", "q", "r", "s", "t", "u", "w"})
      if (idx.used_names.insert(cand).second) return std::string(cand);
    for (int n = 1;; ++n) {
      std::string cand = "t" + std::to_string(n);
      if (idx.used_names.insert(cand).second) return cand;
    }
  };

  std::vector<bool> computed(idx.nodes.size(), false);
  std::map<std::string, std::set<Scheme>> enc_schemes;

  auto ref_ready = [&](const ChildRef& r) {
    return r.is_leaf || computed[r.node];
  };
  auto ref_id = [&](const ChildRef& r) -> const std::string& {
    return r.is_leaf ? r.leaf_id : idx.nodes[r.node].out_id;
  };

  // First stage: majority scheme of the initially-ready ops; ties go to
  // Paillier.
  int elgamal_votes = 0, paillier_votes = 0;
  for (const auto& node : idx.nodes) {
    if (!ref_ready(node.lhs) || !ref_ready(node.rhs)) continue;
    (node.scheme == Scheme::ElGamal ? elgamal_votes : paillier_votes)++;
  }
  Scheme current =
      elgamal_votes > paillier_votes ? Scheme::ElGamal : Scheme::Paillier;

  std::size_t remaining = idx.nodes.size();
  int idle_switches = 0;
  while (remaining > 0) {
    // Greedy-maximal closure: keep absorbing ready ops of this scheme.
    std::vector<std::size_t> stage_nodes;
    std::set<std::size_t> in_stage;
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < idx.nodes.size(); ++i) {
        BuildNode& node = idx.nodes[i];
        if (node.scheduled || node.scheme != current) continue;
        if (!ref_ready(node.lhs) || !ref_ready(node.rhs)) continue;
        node.scheduled = true;
        node.out_id = alloc_name();
        computed[i] = true;
        stage_nodes.push_back(i);
        in_stage.insert(i);
        progress = true;
      }
    }
    if (stage_nodes.empty()) {
      current = other(current);
      if (++idle_switches > 1)
        fail(ErrorCode::Internal, "plan scheduling deadlocked");
      continue;
    }
    idle_switches = 0;
    remaining -= stage_nodes.size();
    plan.stages.push_back({current, plan.steps.size()});

    // Boundary needs: intermediates from earlier stages to re-encrypt and
    // sources first used under this scheme.
    std::vector<std::string> frontier, fresh;
    auto note_input = [&](const ChildRef& r, bool plaintext_operand) {
      if (plaintext_operand) return;
      if (!r.is_leaf && in_stage.count(r.node)) return;
      const std::string& id = ref_id(r);
      if (enc_schemes[id].count(current)) return;
      auto& bucket = r.is_leaf ? fresh : frontier;
      if (std::find(bucket.begin(), bucket.end(), id) == bucket.end())
        bucket.push_back(id);
    };
    for (std::size_t i : stage_nodes) {
      note_input(idx.nodes[i].lhs, false);
      note_input(idx.nodes[i].rhs, idx.nodes[i].scalar_rhs);
    }

    if (!frontier.empty()) {
      for (Scheme s : {Scheme::Paillier, Scheme::ElGamal}) {
        std::vector<std::string> under_s;
        for (const auto& id : frontier)
          if (enc_schemes.at(id).count(s)) under_s.push_back(id);
        if (!under_s.empty())
          plan.steps.push_back({Actor::Agent, decrypt_action(s),
                                std::move(under_s), std::nullopt});
      }
    }
    std::vector<std::string> to_encrypt = frontier;
    to_encrypt.insert(to_encrypt.end(), fresh.begin(), fresh.end());
    if (!to_encrypt.empty()) {
      for (const auto& id : to_encrypt) enc_schemes[id].insert(current);
      plan.steps.push_back({Actor::Agent, encrypt_action(current),
                            std::move(to_encrypt), std::nullopt});
    }

    for (std::size_t i : stage_nodes) {
      const BuildNode& node = idx.nodes[i];
      plan.steps.push_back({Actor::Compute, node.action,
                            {ref_id(node.lhs), ref_id(node.rhs)},
                            node.out_id});
      enc_schemes[node.out_id].insert(current);
    }
    current = other(current);
  }

  plan.root_id = idx.nodes.back().out_id;
  const Scheme root_scheme = *enc_schemes.at(plan.root_id).begin();
  plan.steps.push_back({Actor::Agent, decrypt_action(root_scheme),
                        {plan.root_id}, std::nullopt});
  return plan;
}

OpCounts count_operations(const ExecutionPlan& plan) {
  OpCounts out;
  for (const auto& step : plan.steps)
    out[action_count_key(step.action)] +=
        step.actor == Actor::Agent ? static_cast<long>(step.inputs.size()) : 1;
  return out;
}

OpCounts count_operations_pre_encrypted(const ExecutionPlan& plan) {
  std::set<std::string> source_ids(plan.variables.begin(),
                                   plan.variables.end());
  for (const auto& [id, value] : plan.literals) source_ids.insert(id);
  OpCounts out;
  for (const auto& step : plan.steps) {
    long amount = 1;
    if (step.actor == Actor::Agent) {
      amount = 0;
      const bool is_encrypt = step.action == PlanAction::PaillierEncrypt ||
                              step.action == PlanAction::ElGamalEncrypt;
      for (const auto& id : step.inputs)
        if (!is_encrypt || !source_ids.count(id)) ++amount;
    }
    if (amount > 0) out[action_count_key(step.action)] += amount;
  }
  return out;
}

std::string render_plan(const ExecutionPlan& plan) {
  std::string out;
  for (const auto& step : plan.steps) {
    out += step.actor == Actor::Agent ? "AGENT: " : "  COMPUTE: ";
    out += action_display_name(step.action);
    for (std::size_t j = 0; j < step.inputs.size(); ++j)
      out += (j == 0 ? " " : ", ") + step.inputs[j];
    if (step.output) out += " -> " + *step.output;
    out += '\n';
  }
  return out;
}

nlohmann::json plan_to_json(const ExecutionPlan& plan) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& step : plan.steps) {
    nlohmann::json j{
        {"actor", step.actor == Actor::Agent ? "AGENT" : "COMPUTE"},
        {"action", action_display_name(step.action)},
        {"inputs", step.inputs},
    };
    j["output"] = step.output ? nlohmann::json(*step.output)
                              : nlohmann::json(nullptr);
    arr.push_back(std::move(j));
  }
  return arr;
}

namespace {

// True (unwrapped) encoded integers, tracked through every operation so
// that overflow is detectable before a wrapped value is mistaken for a
// result.
struct ShadowPair {
  Bignum num;
  Bignum den;
};

}  // namespace

Rational execute_plan(const ExecutionPlan& plan,
                      const std::map<std::string, Rational>& bindings,
                      const PaillierKeyPair& paillier_key,
                      const ElGamalKeyPair& elgamal_key, RandomSource& rng,
                      bool checked) {
  if (paillier_key.pub.codec != elgamal_key.pub.codec)
    fail(ErrorCode::Config, "codec mismatch between the Paillier and ElGamal keys");
  if (!paillier_key.has_private() || !elgamal_key.has_private())
    fail(ErrorCode::Config, "the agent needs both private keys");
  const CodecParams codec = paillier_key.pub.codec;
  codec.validate();
  const Bignum half_z = codec.half_z();

  std::map<std::string, Rational> plain;
  std::set<std::string> sources;
  for (const auto& name : plan.variables) {
    const auto it = bindings.find(name);
    if (it == bindings.end())
      fail(ErrorCode::UnboundVariable, "unbound variable '" + name + "'");
    plain.emplace(name, it->second);
    sources.insert(name);
  }
  for (const auto& [id, value] : plan.literals) {
    plain.emplace(id, value);
    sources.insert(id);
  }

  std::map<std::string, PaillierCiphertext> pcts;
  std::map<std::string, ElGamalCiphertext> ects;
  std::map<std::string, ShadowPair> shadow;

  auto shadow_at = [&](const std::string& id) -> const ShadowPair& {
    const auto it = shadow.find(id);
    if (it == shadow.end())
      fail(ErrorCode::Internal, "no shadow for value '" + id + "'");
    return it->second;
  };
  auto plain_at = [&](const std::string& id) -> const Rational& {
    const auto it = plain.find(id);
    if (it == plain.end())
      fail(ErrorCode::Internal, "plan references unknown value '" + id + "'");
    return it->second;
  };

  for (const auto& step : plan.steps) {
    switch (step.action) {
      case PlanAction::PaillierEncrypt:
      case PlanAction::ElGamalEncrypt: {
        for (const auto& id : step.inputs) {
          const Rational& value = plain_at(id);
          EncodedRational er;
          if (sources.count(id)) {
            er = encode(value, codec);
            if (checked)
              shadow[id] = {value.trunc_scaled(codec.k), codec.pow10k()};
          } else if (checked) {
            const Bignum scaled =
                Rational(shadow_at(id).num, shadow_at(id).den)
                    .trunc_scaled(codec.k);
            if (scaled >= half_z || scaled <= -half_z)
              fail(ErrorCode::Range, "intermediate value '" + id +
                                         "' overflows the " +
                                         std::to_string(codec.i) +
                                         "-bit range at re-encryption");
            shadow[id] = {scaled, codec.pow10k()};
            er = encode_truncating(value, codec, /*wrap=*/false);
          } else {
            er = encode_truncating(value, codec, /*wrap=*/true);
          }
          if (step.action == PlanAction::PaillierEncrypt)
            pcts.insert_or_assign(
                id, paillier_encrypt_encoded(er, paillier_key.pub, rng));
          else
            ects.insert_or_assign(
                id, elgamal_encrypt_encoded(er, elgamal_key.pub, rng));
        }
        break;
      }
      case PlanAction::PaillierDecrypt:
      case PlanAction::ElGamalDecrypt: {
        for (const auto& id : step.inputs) {
          if (checked) {
            const ShadowPair& sh = shadow_at(id);
            if (sh.den.is_zero())
              fail(ErrorCode::DivisionByZero,
                   "encrypted division by zero reached value '" + id + "'");
            for (const Bignum* part : {&sh.num, &sh.den})
              if (*part > half_z || *part <= -half_z)
                fail(ErrorCode::Range,
                     "intermediate value '" + id + "' overflows the " +
                         std::to_string(codec.i) + "-bit range");
          }
          Rational value;
          if (step.action == PlanAction::PaillierDecrypt) {
            const auto it = pcts.find(id);
            if (it == pcts.end())
              fail(ErrorCode::Internal,
                   "no Paillier ciphertext for value '" + id + "'");
            value = paillier_decrypt(it->second, paillier_key);
          } else {
            const auto it = ects.find(id);
            if (it == ects.end())
              fail(ErrorCode::Internal,
                   "no ElGamal ciphertext for value '" + id + "'");
            value = elgamal_decrypt(it->second, elgamal_key);
          }
          if (checked) {
            const ShadowPair& sh = shadow_at(id);
            if (value != Rational(sh.num, sh.den))
              fail(ErrorCode::Internal,
                   "homomorphic result diverged from the plaintext shadow "
                   "for value '" +
                       id + "'");
          }
          plain.insert_or_assign(id, std::move(value));
        }
        break;
      }
      case PlanAction::PaillierAdd:
      case PlanAction::PaillierSub: {
        const auto a = pcts.find(step.inputs.at(0));
        const auto b = pcts.find(step.inputs.at(1));
        if (a == pcts.end() || b == pcts.end())
          fail(ErrorCode::Internal, "compute step consumes a missing ciphertext");
        pcts.insert_or_assign(
            *step.output,
            step.action == PlanAction::PaillierAdd
                ? paillier_add(paillier_key.pub, a->second, b->second)
                : paillier_sub(paillier_key.pub, a->second, b->second));
        if (checked) {
          const ShadowPair& sa = shadow_at(step.inputs[0]);
          const ShadowPair& sb = shadow_at(step.inputs[1]);
          if (sa.den != sb.den)
            fail(ErrorCode::Internal, "shadow denominators diverged");
          shadow[*step.output] = {step.action == PlanAction::PaillierAdd
                                      ? sa.num + sb.num
                                      : sa.num - sb.num,
                                  sa.den};
        }
        break;
      }
      case PlanAction::PaillierScalarMul: {
        const auto a = pcts.find(step.inputs.at(0));
        if (a == pcts.end())
          fail(ErrorCode::Internal, "compute step consumes a missing ciphertext");
        const auto lit = plan.literals.find(step.inputs.at(1));
        if (lit == plan.literals.end() || !lit->second.is_integer())
          fail(ErrorCode::Internal, "scalar operand is not an integer literal");
        const Bignum& s = lit->second.num();
        pcts.insert_or_assign(
            *step.output, paillier_scalar_mul(paillier_key.pub, a->second, s));
        if (checked) {
          const ShadowPair& sa = shadow_at(step.inputs[0]);
          shadow[*step.output] = {sa.num * s, sa.den};
        }
        break;
      }
      case PlanAction::ElGamalMul:
      case PlanAction::ElGamalDiv: {
        const auto a = ects.find(step.inputs.at(0));
        const auto b = ects.find(step.inputs.at(1));
        if (a == ects.end() || b == ects.end())
          fail(ErrorCode::Internal, "compute step consumes a missing ciphertext");
        ects.insert_or_assign(
            *step.output,
            step.action == PlanAction::ElGamalMul
                ? elgamal_mul(elgamal_key.pub, a->second, b->second)
                : elgamal_div(elgamal_key.pub, a->second, b->second));
        if (checked) {
          const ShadowPair& sa = shadow_at(step.inputs[0]);
          const ShadowPair& sb = shadow_at(step.inputs[1]);
          shadow[*step.output] =
              step.action == PlanAction::ElGamalMul
                  ? ShadowPair{sa.num * sb.num, sa.den * sb.den}
                  : ShadowPair{sa.num * sb.den, sa.den * sb.num};
        }
        break;
      }
      case PlanAction::Reencrypt:
        fail(ErrorCode::Internal,
             "Reencrypt steps are never materialized by the builder");
    }
  }

  return plain_at(plan.root_id);
}

}  // namespace phemu
