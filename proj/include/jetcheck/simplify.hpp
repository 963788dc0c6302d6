#pragma once

#include <utility>
#include <vector>

#include "jetcheck/expr.hpp"

namespace jetcheck {

inline Expr simplify(const Expr& e);

namespace detail {

// Flattens a +/- chain into signed terms, folding constants into `csum`.
inline void collect_terms(const Expr& e, int sign, double& csum,
                          std::vector<std::pair<int, Expr>>& terms,
                          bool already_simplified) {
  if (e.op() == Op::Add || e.op() == Op::Sub) {
    const int rsign = e.op() == Op::Sub ? -sign : sign;
    collect_terms(e.lhs(), sign, csum, terms, already_simplified);
    collect_terms(e.rhs(), rsign, csum, terms, already_simplified);
    return;
  }
  Expr s = already_simplified ? e : simplify(e);
  if (s.op() == Op::Add || s.op() == Op::Sub) {
    collect_terms(s, sign, csum, terms, true);
  } else if (s.op() == Op::Neg) {
    collect_terms(s.lhs(), -sign, csum, terms, true);
  } else if (s.is_const()) {
    csum += sign * s.value();
  } else {
    terms.emplace_back(sign, s);
  }
}

// Flattens a * chain into factors, folding constants (and signs) into `cprod`.
inline void collect_factors(const Expr& e, double& cprod, std::vector<Expr>& factors,
                            bool already_simplified) {
  if (e.op() == Op::Mul) {
    collect_factors(e.lhs(), cprod, factors, already_simplified);
    collect_factors(e.rhs(), cprod, factors, already_simplified);
    return;
  }
  Expr s = already_simplified ? e : simplify(e);
  if (s.op() == Op::Mul) {
    collect_factors(s, cprod, factors, true);
  } else if (s.op() == Op::Neg) {
    cprod = -cprod;
    collect_factors(s.lhs(), cprod, factors, true);
  } else if (s.is_const()) {
    cprod *= s.value();
  } else {
    factors.push_back(s);
  }
}

inline Expr fold_unary_const(Op op, const Expr& sub) {
  Expr raw = Expr::make_unary(op, sub);
  if (!sub.is_const()) return raw;
  try {
    return Expr::constant(evaluate(raw, {}));
  } catch (const EvalError&) {
    return raw;  // e.g. ln(-1): leave it to fail at evaluation time
  }
}

}  // namespace detail

/// Conservative simplification: constant folding, 0/1 identities and
/// flattening of +/* chains. No factoring and no trigonometric rewrites,
/// so values are preserved wherever the input is defined.
inline Expr simplify(const Expr& e) {
  switch (e.op()) {
    case Op::Const:
    case Op::Var:
      return e;

    case Op::Neg: {
      Expr s = simplify(e.lhs());
      if (s.is_const()) return Expr::constant(-s.value());
      if (s.op() == Op::Neg) return s.lhs();
      return Expr::make_unary(Op::Neg, s);
    }

    case Op::Sin: case Op::Cos: case Op::Exp: case Op::Ln: case Op::Sqrt:
      return detail::fold_unary_const(e.op(), simplify(e.lhs()));

    case Op::Add: case Op::Sub: {
      double csum = 0.0;
      std::vector<std::pair<int, Expr>> raw_terms;
      detail::collect_terms(e, +1, csum, raw_terms, false);
      // Cancel structurally identical terms of opposite sign (x - x -> 0).
      std::vector<std::pair<int, Expr>> terms;
      std::vector<std::string> keys;
      for (const auto& [sign, t] : raw_terms) {
        const std::string key = render(t);
        bool merged = false;
        for (std::size_t k = 0; k < terms.size(); ++k) {
          if (keys[k] == key) {
            terms[k].first += sign;
            merged = true;
            break;
          }
        }
        if (!merged) {
          terms.emplace_back(sign, t);
          keys.push_back(key);
        }
      }
      std::vector<std::pair<int, Expr>> kept;
      for (auto& [count, t] : terms) {
        for (int k = 0; k < std::abs(count); ++k)
          kept.emplace_back(count > 0 ? 1 : -1, t);
      }
      if (kept.empty()) return Expr::constant(csum);
      Expr acc = kept[0].second;
      if (kept[0].first < 0) acc = Expr::make_unary(Op::Neg, acc);
      for (std::size_t k = 1; k < kept.size(); ++k)
        acc = Expr::make_binary(kept[k].first > 0 ? Op::Add : Op::Sub, acc,
                                kept[k].second);
      if (csum > 0.0) acc = Expr::make_binary(Op::Add, acc, Expr::constant(csum));
      if (csum < 0.0) acc = Expr::make_binary(Op::Sub, acc, Expr::constant(-csum));
      return acc;
    }

    case Op::Mul: {
      double cprod = 1.0;
      std::vector<Expr> factors;
      detail::collect_factors(e, cprod, factors, false);
      if (cprod == 0.0) return Expr::constant(0.0);
      if (factors.empty()) return Expr::constant(cprod);
      Expr acc = Expr::constant(1.0);
      bool first = true;
      if (cprod != 1.0 && cprod != -1.0) {
        acc = Expr::constant(cprod);
        first = false;
      }
      for (const Expr& f : factors) {
        acc = first ? f : Expr::make_binary(Op::Mul, acc, f);
        first = false;
      }
      if (cprod == -1.0) acc = Expr::make_unary(Op::Neg, acc);
      return acc;
    }

    case Op::Div: {
      Expr a = simplify(e.lhs());
      Expr b = simplify(e.rhs());
      if (a.is_const() && b.is_const() && b.value() != 0.0)
        return Expr::constant(a.value() / b.value());
      if (b.is_const(1.0)) return a;
      return Expr::make_binary(Op::Div, a, b);
    }

    case Op::Pow: {
      Expr base = simplify(e.lhs());
      const Rational& r = e.exponent();
      if (r.num == 0) return Expr::constant(1.0);
      if (r == Rational(1)) return base;
      if (base.is_const()) {
        Expr raw = Expr::make_pow(base, r);
        try {
          return Expr::constant(evaluate(raw, {}));
        } catch (const EvalError&) {
          return raw;
        }
      }
      return Expr::make_pow(base, r);
    }
  }
  throw Error("simplify: unknown node");
}

}  // namespace jetcheck
