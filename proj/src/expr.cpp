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

#include "expr.hpp"

#include <cctype>

#include "errors.hpp"

namespace phemu {

char op_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return '+';
    case BinOp::Sub: return '-';
    case BinOp::Mul: return '*';
    case BinOp::Div: return '/';
  }
  return '?';
}

std::unique_ptr<Expr> Expr::make_literal(Rational value) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Literal;
  e->literal = std::move(value);
  return e;
}

std::unique_ptr<Expr> Expr::make_variable(std::string name) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Variable;
  e->name = std::move(name);
  return e;
}

std::unique_ptr<Expr> Expr::make_binary(BinOp op, std::unique_ptr<Expr> lhs,
                                        std::unique_ptr<Expr> rhs) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Expr> parse() {
    skip_ws();
    if (at_end()) fail(ErrorCode::Parse, "empty expression");
    auto e = parse_sum();
    skip_ws();
    if (!at_end()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse,
         "syntax error at position " + std::to_string(pos_) + ": " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (at_end() || peek() != c) return false;
    ++pos_;
    return true;
  }

  std::unique_ptr<Expr> parse_sum() {
    auto lhs = parse_term();
    while (true) {
      if (consume('+'))
        lhs = Expr::make_binary(BinOp::Add, std::move(lhs), parse_term());
      else if (consume('-'))
        lhs = Expr::make_binary(BinOp::Sub, std::move(lhs), parse_term());
      else
        return lhs;
    }
  }

  std::unique_ptr<Expr> parse_term() {
    auto lhs = parse_unary();
    while (true) {
      if (consume('*'))
        lhs = Expr::make_binary(BinOp::Mul, std::move(lhs), parse_unary());
      else if (consume('/'))
        lhs = Expr::make_binary(BinOp::Div, std::move(lhs), parse_unary());
      else
        return lhs;
    }
  }

  std::unique_ptr<Expr> parse_unary() {
    if (consume('-'))
      return Expr::make_binary(BinOp::Sub, Expr::make_literal(Rational()),
                               parse_unary());
    return parse_primary();
  }

  std::unique_ptr<Expr> parse_primary() {
    skip_ws();
    if (at_end()) error("expected a value");
    const char c = peek();
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!consume(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_variable();
    error(std::string("unexpected character '") + c + "'");
  }

  std::unique_ptr<Expr> parse_number() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (!at_end() && peek() == '.') {
      ++pos_;
      const std::size_t frac_start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == frac_start) error("expected digits after '.'");
    }
    return Expr::make_literal(
        Rational::from_decimal_string(text_.substr(start, pos_ - start)));
  }

  std::unique_ptr<Expr> parse_variable() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                         peek() == '_'))
      ++pos_;
    return Expr::make_variable(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Expr> parse_expression(std::string_view text) {
  return Parser(text).parse();
}

Rational eval_plaintext(const Expr& e,
                        const std::map<std::string, Rational>& bindings) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      return e.literal;
    case Expr::Kind::Variable: {
      const auto it = bindings.find(e.name);
      if (it == bindings.end())
        fail(ErrorCode::UnboundVariable, "unbound variable '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::Binary: {
      const Rational l = eval_plaintext(*e.lhs, bindings);
      const Rational r = eval_plaintext(*e.rhs, bindings);
      switch (e.op) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
        case BinOp::Div: return l / r;
      }
    }
  }
  fail(ErrorCode::Internal, "malformed expression node");
}

std::string to_infix_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      return e.literal.to_fraction_string();
    case Expr::Kind::Variable:
      return e.name;
    case Expr::Kind::Binary:
      return "(" + to_infix_string(*e.lhs) + " " + op_symbol(e.op) + " " +
             to_infix_string(*e.rhs) + ")";
  }
  return "?";
}

}  // namespace phemu
