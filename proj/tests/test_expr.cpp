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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "errors.hpp"
#include "expr.hpp"

using namespace phemu;

TEST_CASE("the worked expression parses to the expected tree") {
  const auto e = parse_expression("(a+b)*(c+d)");
  REQUIRE(e->kind == Expr::Kind::Binary);
  CHECK(e->op == BinOp::Mul);
  REQUIRE(e->lhs->kind == Expr::Kind::Binary);
  CHECK(e->lhs->op == BinOp::Add);
  CHECK(e->lhs->lhs->name == "a");
  CHECK(e->lhs->rhs->name == "b");
  REQUIRE(e->rhs->kind == Expr::Kind::Binary);
  CHECK(e->rhs->op == BinOp::Add);
  CHECK(e->rhs->lhs->name == "c");
  CHECK(e->rhs->rhs->name == "d");
}

TEST_CASE("a bare variable") {
  const auto e = parse_expression("a");
  CHECK(e->kind == Expr::Kind::Variable);
  CHECK(e->name == "a");
}

TEST_CASE("precedence: multiplication binds tighter than addition") {
  const auto e = parse_expression("a+b*c");
  REQUIRE(e->kind == Expr::Kind::Binary);
  CHECK(e->op == BinOp::Add);
  CHECK(e->lhs->name == "a");
  CHECK(e->rhs->op == BinOp::Mul);
  CHECK(to_infix_string(*e) == "(a + (b * c))");
}

TEST_CASE("division shares the multiplication precedence level") {
  CHECK(to_infix_string(*parse_expression("a/b*c")) == "((a / b) * c)");
  CHECK(to_infix_string(*parse_expression("a+b/c")) == "(a + (b / c))");
}

TEST_CASE("left associativity") {
  CHECK(to_infix_string(*parse_expression("a-b-c")) == "((a - b) - c)");
  CHECK(to_infix_string(*parse_expression("a/b/c")) == "((a / b) / c)");
}

TEST_CASE("unary minus desugars to zero-minus") {
  const auto e = parse_expression("-x");
  REQUIRE(e->kind == Expr::Kind::Binary);
  CHECK(e->op == BinOp::Sub);
  CHECK(e->lhs->kind == Expr::Kind::Literal);
  CHECK(e->lhs->literal == Rational(0));
  CHECK(e->rhs->name == "x");
  CHECK(to_infix_string(*parse_expression("--x")) == "(0 - (0 - x))");
  CHECK(to_infix_string(*parse_expression("a*-b")) == "(a * (0 - b))");
}

TEST_CASE("decimal literals are exact") {
  const auto e = parse_expression("1.5*x");
  CHECK(e->lhs->literal == Rational(3, 2));
  CHECK(parse_expression("0.125")->literal == Rational(1, 8));
  CHECK(parse_expression("42")->literal == Rational(42));
}

TEST_CASE("whitespace and identifier shapes") {
  CHECK(to_infix_string(*parse_expression("  a1 +\t_b2 ")) == "(a1 + _b2)");
  CHECK(parse_expression("weight_1")->name == "weight_1");
}

TEST_CASE("syntax errors carry a position") {
  auto expect_parse_error = [](const std::string& text) {
    try {
      parse_expression(text);
      FAIL("expected a parse error for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(expect_parse_error("").find("empty") != std::string::npos);
  CHECK(expect_parse_error("a+").find("position") != std::string::npos);
  CHECK(expect_parse_error("(a").find("')'") != std::string::npos);
  expect_parse_error("a b");
  expect_parse_error("1.");
  expect_parse_error("$x");
  expect_parse_error("a**b");
}

TEST_CASE("plaintext evaluation") {
  const std::map<std::string, Rational> bindings = {
      {"a", Rational(1)}, {"b", Rational(2)}, {"c", Rational(3)},
      {"d", Rational(4)}};
  CHECK(eval_plaintext(*parse_expression("(a+b)*(c+d)"), bindings) ==
        Rational(21));
  CHECK(eval_plaintext(*parse_expression("a/b"), bindings) == Rational(1, 2));
  CHECK(eval_plaintext(*parse_expression("2+3*4"), bindings) == Rational(14));
  try {
    eval_plaintext(*parse_expression("a+zz"), bindings);
    FAIL("expected UnboundVariable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundVariable);
  }
  try {
    eval_plaintext(*parse_expression("a/(b-2)"), bindings);
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisionByZero);
  }
}
