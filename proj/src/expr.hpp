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

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "rational.hpp"

namespace phemu {

enum class BinOp { Add, Sub, Mul, Div };

char op_symbol(BinOp op);

/// Arithmetic AST over exact-decimal literals and named variables.
struct Expr {
  enum class Kind { Literal, Variable, Binary };

  Kind kind;
  Rational literal;                       // Literal
  std::string name;                       // Variable
  BinOp op = BinOp::Add;                  // Binary
  std::unique_ptr<Expr> lhs, rhs;         // Binary

  static std::unique_ptr<Expr> make_literal(Rational value);
  static std::unique_ptr<Expr> make_variable(std::string name);
  static std::unique_ptr<Expr> make_binary(BinOp op, std::unique_ptr<Expr> lhs,
                                           std::unique_ptr<Expr> rhs);
};

/// Standard infix grammar: precedence {*, /} > {+, -}, left associative,
/// parentheses, unary minus desugared to (0 - x). Literals are exact
/// decimals; variables match [a-zA-Z_][a-zA-Z0-9_]*.
/// Throws Parse with the offending position on bad input.
std::unique_ptr<Expr> parse_expression(std::string_view text);

/// Exact plaintext evaluation. Throws UnboundVariable / DivisionByZero.
Rational eval_plaintext(const Expr& e,
                        const std::map<std::string, Rational>& bindings);

std::string to_infix_string(const Expr& e);

}  // namespace phemu
