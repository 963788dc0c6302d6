#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "jetcheck/expr.hpp"

namespace jetcheck {

// Formula grammar (whitespace-insensitive):
//
//   expression := term (('+' | '-') term)*
//   term       := factor (('*' | '/') factor)*
//   factor     := '-' factor | power
//   power      := primary ('^' exponent)?          (right-associative)
//   primary    := NUMBER | IDENT | IDENT '(' expression ')' | '(' expression ')'
//
// '^' binds tighter than unary minus, and its exponent must fold to a
// constant rational. Identifiers match [A-Za-z_][A-Za-z0-9_]*.

namespace detail {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind = End;
  std::size_t pos = 0;     // byte offset in source
  std::string text;        // identifier text
  double number = 0.0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    const char c = src_[pos_];
    switch (c) {
      case '+': tok_.kind = Token::Plus; ++pos_; return;
      case '-': tok_.kind = Token::Minus; ++pos_; return;
      case '*': tok_.kind = Token::Star; ++pos_; return;
      case '/': tok_.kind = Token::Slash; ++pos_; return;
      case '^': tok_.kind = Token::Caret; ++pos_; return;
      case '(': tok_.kind = Token::LParen; ++pos_; return;
      case ')': tok_.kind = Token::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      // strtod needs a terminated buffer; copy the remainder once.
      std::string rest(src_.substr(pos_));
      char* end = nullptr;
      tok_.number = std::strtod(rest.c_str(), &end);
      tok_.kind = Token::Number;
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t len = 0;
      while (pos_ + len < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_ + len])) ||
              src_[pos_ + len] == '_'))
        ++len;
      tok_.kind = Token::Ident;
      tok_.text = std::string(src_.substr(pos_, len));
      pos_ += len;
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_, {});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) {}

  Expr parse_all() {
    Expr e = expression();
    const Token& t = lex_.peek();
    if (t.kind != Token::End)
      throw ParseError("trailing input", t.pos, {"operator", "end of input"});
    return e;
  }

private:
  Expr expression() {
    Expr e = term();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Plus) {
        lex_.take();
        e = Expr::make_binary(Op::Add, e, term());
      } else if (t.kind == Token::Minus) {
        lex_.take();
        e = Expr::make_binary(Op::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Token::Star) {
        lex_.take();
        e = Expr::make_binary(Op::Mul, e, factor());
      } else if (t.kind == Token::Slash) {
        lex_.take();
        e = Expr::make_binary(Op::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  Expr factor() {
    if (lex_.peek().kind == Token::Minus) {
      lex_.take();
      return Expr::make_unary(Op::Neg, factor());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (lex_.peek().kind == Token::Caret) {
      lex_.take();
      const std::size_t at = lex_.peek().pos;
      Expr raw = exponent_operand();
      Rational r;
      if (!fold_rational(raw, r))
        throw ParseError("exponent must be a constant rational", at,
                         {"integer", "rational constant"});
      return Expr::make_pow(base, r);
    }
    return base;
  }

  // Exponents admit their own little constant grammar so that forms like
  // x^-2, x^(1/2) and x^2.5 all work.
  Expr exponent_operand() {
    if (lex_.peek().kind == Token::Minus) {
      lex_.take();
      return Expr::make_unary(Op::Neg, exponent_operand());
    }
    Expr base = primary();
    if (lex_.peek().kind == Token::Caret) {
      lex_.take();
      const std::size_t at = lex_.peek().pos;
      Expr rhsexp = exponent_operand();
      Rational r;
      if (!fold_rational(rhsexp, r) || !r.is_integer())
        throw ParseError("nested exponent must be a constant integer", at,
                         {"integer"});
      return Expr::make_pow(base, r);
    }
    return base;
  }

  static bool fold_rational(const Expr& e, Rational& out) {
    switch (e.op()) {
      case Op::Const: return rational_from_double(e.value(), out);
      case Op::Neg: {
        Rational r;
        if (!fold_rational(e.lhs(), r)) return false;
        out = -r;
        return true;
      }
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: {
        Rational a, b;
        if (!fold_rational(e.lhs(), a) || !fold_rational(e.rhs(), b)) return false;
        if (e.op() == Op::Div && b.num == 0) return false;
        switch (e.op()) {
          case Op::Add: out = a + b; break;
          case Op::Sub: out = a - b; break;
          case Op::Mul: out = a * b; break;
          default: out = a / b; break;
        }
        return true;
      }
      case Op::Pow: {
        Rational a;
        if (!fold_rational(e.lhs(), a)) return false;
        const Rational& r = e.exponent();
        if (!r.is_integer() || r.num < 0) return false;
        Rational acc(1);
        for (std::int64_t k = 0; k < r.num; ++k) acc = acc * a;
        out = acc;
        return true;
      }
      default: return false;
    }
  }

  Expr primary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Token::Number:
        lex_.take();
        return Expr::constant(t.number);
      case Token::Ident: {
        lex_.take();
        if (lex_.peek().kind == Token::LParen) {
          const Op fn = function_op(t);
          lex_.take();
          Expr arg = expression();
          expect(Token::RParen, ")");
          return Expr::make_unary(fn, arg);
        }
        return Expr::variable(t.text);
      }
      case Token::LParen: {
        lex_.take();
        Expr e = expression();
        expect(Token::RParen, ")");
        return e;
      }
      default:
        throw ParseError("expected an operand", t.pos,
                         {"number", "identifier", "function call", "("});
    }
  }

  static Op function_op(const Token& t) {
    if (t.text == "sin") return Op::Sin;
    if (t.text == "cos") return Op::Cos;
    if (t.text == "exp") return Op::Exp;
    if (t.text == "ln") return Op::Ln;
    if (t.text == "sqrt") return Op::Sqrt;
    throw ParseError("unknown function '" + t.text + "'", t.pos,
                     {"sin", "cos", "exp", "ln", "sqrt"});
  }

  void expect(Token::Kind kind, const std::string& what) {
    const Token& t = lex_.peek();
    if (t.kind != kind)
      throw ParseError("expected '" + what + "'", t.pos, {what});
    lex_.take();
  }

  Lexer lex_;
};

}  // namespace detail

/// Parses formula text to an expression tree, preserving the structure as
/// written. Throws ParseError with byte offset and expected-token set.
inline Expr parse(std::string_view src) { return detail::Parser(src).parse_all(); }

}  // namespace jetcheck
