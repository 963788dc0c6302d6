#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "jetcheck/errors.hpp"
#include "jetcheck/rational.hpp"

namespace jetcheck {

enum class Op {
  Const, Var,
  Neg, Sin, Cos, Exp, Ln, Sqrt,
  Add, Sub, Mul, Div, Pow
};

inline bool op_is_unary(Op op) {
  return op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp ||
         op == Op::Ln || op == Op::Sqrt;
}
inline bool op_is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div ||
         op == Op::Pow;
}

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op;
  double value = 0.0;    // Const
  std::string name;      // Var
  Rational exponent;     // Pow
  NodePtr a, b;          // children (b unused for unary ops and Pow)
};

/// Variable assignment used for numeric evaluation. Evaluation throws
/// EvalError on any variable missing from the binding.
using Binding = std::map<std::string, double>;

/// Immutable symbolic scalar expression. Copies share structure; all
/// operations are pure, so expressions are safe to use from many threads.
class Expr {
public:
  Expr() : n_(constant_node(0.0)) {}
  /*implicit*/ Expr(double v) : n_(constant_node(v)) {}
  /*implicit*/ Expr(int v) : n_(constant_node(static_cast<double>(v))) {}

  static Expr constant(double v) { return Expr(constant_node(v)); }
  static Expr variable(const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Var;
    n->name = name;
    return Expr(std::move(n));
  }

  /// Raw node constructors used by the parser: no folding, the tree is
  /// kept exactly as written.
  static Expr make_unary(Op op, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = a.n_;
    return Expr(std::move(n));
  }
  static Expr make_binary(Op op, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = a.n_;
    n->b = b.n_;
    return Expr(std::move(n));
  }
  static Expr make_pow(Expr base, Rational e) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->a = base.n_;
    n->exponent = e;
    return Expr(std::move(n));
  }

  Op op() const { return n_->op; }
  double value() const { return n_->value; }
  const std::string& name() const { return n_->name; }
  const Rational& exponent() const { return n_->exponent; }
  Expr lhs() const { return Expr(n_->a); }
  Expr rhs() const { return Expr(n_->b); }

  bool is_const() const { return n_->op == Op::Const; }
  bool is_const(double v) const { return is_const() && n_->value == v; }

  const NodePtr& node() const { return n_; }

private:
  explicit Expr(NodePtr n) : n_(std::move(n)) {}
  static NodePtr constant_node(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return n;
  }
  friend Expr from_node(NodePtr n);
  NodePtr n_;
};

inline Expr from_node(NodePtr n) { return Expr(std::move(n)); }

// ---------------------------------------------------------------------------
// Rendering

namespace detail {
// Precedence levels matching the parse grammar: ^ > unary - > * / > + -.
inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add: case Op::Sub: return 1;
    case Op::Mul: case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return e.value() < 0 ? 3 : 5;  // negative literal ~ unary minus
    default: return 5;
  }
}

inline std::string render_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}
}  // namespace detail

/// Renders to formula text in the input grammar; parsing the result yields
/// a value-equal expression.
inline std::string render(const Expr& e) {
  using detail::precedence;
  auto wrap = [](const Expr& child, int min_prec) {
    std::string s = render(child);
    if (precedence(child) < min_prec) return "(" + s + ")";
    return s;
  };
  switch (e.op()) {
    case Op::Const: return detail::render_double(e.value());
    case Op::Var: return e.name();
    case Op::Neg: return "-" + wrap(e.lhs(), 3);
    case Op::Sin: return "sin(" + render(e.lhs()) + ")";
    case Op::Cos: return "cos(" + render(e.lhs()) + ")";
    case Op::Exp: return "exp(" + render(e.lhs()) + ")";
    case Op::Ln: return "ln(" + render(e.lhs()) + ")";
    case Op::Sqrt: return "sqrt(" + render(e.lhs()) + ")";
    case Op::Add: return wrap(e.lhs(), 1) + " + " + wrap(e.rhs(), 2);
    case Op::Sub: return wrap(e.lhs(), 1) + " - " + wrap(e.rhs(), 2);
    case Op::Mul: return wrap(e.lhs(), 2) + "*" + wrap(e.rhs(), 3);
    case Op::Div: return wrap(e.lhs(), 2) + "/" + wrap(e.rhs(), 3);
    case Op::Pow: {
      const Rational& r = e.exponent();
      std::string es = (r.is_integer() && r.num >= 0) ? r.str() : "(" + r.str() + ")";
      return wrap(e.lhs(), 5) + "^" + es;
    }
  }
  throw Error("render: unknown node");
}

// ---------------------------------------------------------------------------
// Evaluation

inline double evaluate(const Expr& e, const Binding& b) {
  auto domain_error = [&](const std::string& why) -> double {
    throw EvalError(EvalError::Kind::DomainViolation,
                    why + " in '" + render(e) + "'", render(e));
  };
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Var: {
      auto it = b.find(e.name());
      if (it == b.end())
        throw EvalError(EvalError::Kind::UnboundVariable,
                        "unbound variable '" + e.name() + "'", e.name());
      return it->second;
    }
    case Op::Neg: return -evaluate(e.lhs(), b);
    case Op::Sin: return std::sin(evaluate(e.lhs(), b));
    case Op::Cos: return std::cos(evaluate(e.lhs(), b));
    case Op::Exp: return std::exp(evaluate(e.lhs(), b));
    case Op::Ln: {
      const double v = evaluate(e.lhs(), b);
      if (v <= 0.0) return domain_error("ln of non-positive value");
      return std::log(v);
    }
    case Op::Sqrt: {
      const double v = evaluate(e.lhs(), b);
      if (v < 0.0) return domain_error("sqrt of negative value");
      return std::sqrt(v);
    }
    case Op::Add: return evaluate(e.lhs(), b) + evaluate(e.rhs(), b);
    case Op::Sub: return evaluate(e.lhs(), b) - evaluate(e.rhs(), b);
    case Op::Mul: return evaluate(e.lhs(), b) * evaluate(e.rhs(), b);
    case Op::Div: {
      const double den = evaluate(e.rhs(), b);
      if (den == 0.0) return domain_error("division by zero");
      return evaluate(e.lhs(), b) / den;
    }
    case Op::Pow: {
      const double base = evaluate(e.lhs(), b);
      const Rational& r = e.exponent();
      if (r.num == 0) return 1.0;
      if (r.is_integer()) {
        if (base == 0.0 && r.num < 0) return domain_error("zero base with negative exponent");
        return std::pow(base, static_cast<double>(r.num));
      }
      if (base < 0.0) return domain_error("fractional power of negative base");
      if (base == 0.0 && r.num < 0) return domain_error("zero base with negative exponent");
      return std::pow(base, r.value());
    }
  }
  throw Error("evaluate: unknown node");
}

// ---------------------------------------------------------------------------
// Folding constructors. Module code builds expressions with these, which
// collapse neutral elements so that derived trees stay small. The parser
// does not use them.

inline Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.lhs();
  return Expr::make_unary(Op::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() + b.value());
  if (a.is_const(0.0)) return b;
  if (b.is_const(0.0)) return a;
  return Expr::make_binary(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() - b.value());
  if (b.is_const(0.0)) return a;
  if (a.is_const(0.0)) return -b;
  return Expr::make_binary(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::constant(a.value() * b.value());
  if (a.is_const(0.0) || b.is_const(0.0)) return Expr::constant(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (a.is_const(-1.0)) return -b;
  if (b.is_const(-1.0)) return -a;
  return Expr::make_binary(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  if (b.is_const(1.0)) return a;
  return Expr::make_binary(Op::Div, a, b);
}

inline Expr pow(const Expr& base, const Rational& r) {
  if (r.num == 0) return Expr::constant(1.0);
  if (r == Rational(1)) return base;
  return Expr::make_pow(base, r);
}
inline Expr pow(const Expr& base, std::int64_t n) { return pow(base, Rational(n)); }

inline Expr sin(const Expr& a) { return Expr::make_unary(Op::Sin, a); }
inline Expr cos(const Expr& a) { return Expr::make_unary(Op::Cos, a); }
inline Expr exp(const Expr& a) { return Expr::make_unary(Op::Exp, a); }
inline Expr ln(const Expr& a) { return Expr::make_unary(Op::Ln, a); }
inline Expr sqrt(const Expr& a) { return Expr::make_unary(Op::Sqrt, a); }

inline Expr var(const std::string& name) { return Expr::variable(name); }

// ---------------------------------------------------------------------------
// Differentiation: exact and closed over the grammar.

inline Expr differentiate(const Expr& e, const std::string& v) {
  switch (e.op()) {
    case Op::Const: return Expr::constant(0.0);
    case Op::Var: return Expr::constant(e.name() == v ? 1.0 : 0.0);
    case Op::Neg: return -differentiate(e.lhs(), v);
    case Op::Sin: return cos(e.lhs()) * differentiate(e.lhs(), v);
    case Op::Cos: return -(sin(e.lhs()) * differentiate(e.lhs(), v));
    case Op::Exp: return exp(e.lhs()) * differentiate(e.lhs(), v);
    case Op::Ln: return differentiate(e.lhs(), v) / e.lhs();
    case Op::Sqrt:
      return differentiate(e.lhs(), v) / (Expr::constant(2.0) * sqrt(e.lhs()));
    case Op::Add: return differentiate(e.lhs(), v) + differentiate(e.rhs(), v);
    case Op::Sub: return differentiate(e.lhs(), v) - differentiate(e.rhs(), v);
    case Op::Mul:
      return differentiate(e.lhs(), v) * e.rhs() + e.lhs() * differentiate(e.rhs(), v);
    case Op::Div:
      return (differentiate(e.lhs(), v) * e.rhs() - e.lhs() * differentiate(e.rhs(), v)) /
             (e.rhs() * e.rhs());
    case Op::Pow: {
      const Rational& r = e.exponent();
      return Expr::constant(r.value()) * pow(e.lhs(), r - Rational(1)) *
             differentiate(e.lhs(), v);
    }
  }
  throw Error("differentiate: unknown node");
}

/// n-th derivative by iteration.
inline Expr differentiate(const Expr& e, const std::string& v, int order) {
  Expr d = e;
  for (int k = 0; k < order; ++k) d = differentiate(d, v);
  return d;
}

// ---------------------------------------------------------------------------
// Variables and substitution

inline void collect_free_variables(const Expr& e, std::set<std::string>& out) {
  switch (e.op()) {
    case Op::Const: return;
    case Op::Var: out.insert(e.name()); return;
    default:
      collect_free_variables(e.lhs(), out);
      if (op_is_binary(e.op()) && e.op() != Op::Pow)
        collect_free_variables(e.rhs(), out);
  }
}

inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_free_variables(e, out);
  return out;
}

/// Replaces variables by expressions (simultaneous substitution). Binary
/// nodes are rebuilt through the folding constructors, so compositions stay
/// compact.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& repl) {
  switch (e.op()) {
    case Op::Const: return e;
    case Op::Var: {
      auto it = repl.find(e.name());
      return it == repl.end() ? e : it->second;
    }
    case Op::Pow: return pow(substitute(e.lhs(), repl), e.exponent());
    case Op::Add: return substitute(e.lhs(), repl) + substitute(e.rhs(), repl);
    case Op::Sub: return substitute(e.lhs(), repl) - substitute(e.rhs(), repl);
    case Op::Mul: return substitute(e.lhs(), repl) * substitute(e.rhs(), repl);
    case Op::Div: return substitute(e.lhs(), repl) / substitute(e.rhs(), repl);
    case Op::Neg: return -substitute(e.lhs(), repl);
    default: return Expr::make_unary(e.op(), substitute(e.lhs(), repl));
  }
}

/// Depends-on test after folding; used for syntactic holonomicity checks.
inline bool depends_on(const Expr& e, const std::string& name) {
  return free_variables(e).count(name) > 0;
}

}  // namespace jetcheck
