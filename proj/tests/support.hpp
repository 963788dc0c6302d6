#pragma once

#include <random>
#include <string>
#include <vector>

#include "jetcheck/expr.hpp"
#include "jetcheck/parse.hpp"

// Shared helpers for the test suites: random bindings, value-equality of
// expressions on samples, finite-difference oracles, random polynomials.
namespace testutil {

using jetcheck::Binding;
using jetcheck::Expr;

inline std::vector<Binding> random_bindings(const std::vector<std::string>& vars,
                                            int count, unsigned seed,
                                            double lo = -2.0, double hi = 2.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Binding> out;
  for (int k = 0; k < count; ++k) {
    Binding b;
    for (const auto& v : vars) b[v] = dist(rng);
    out.push_back(std::move(b));
  }
  return out;
}

/// Max over sample bindings of |a - b| / (1 + |a|).
inline double max_rel_gap(const Expr& a, const Expr& b,
                          const std::vector<Binding>& samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    const double va = evaluate(a, s);
    const double vb = evaluate(b, s);
    const double gap = std::abs(va - vb) / (1.0 + std::abs(va));
    if (gap > worst) worst = gap;
  }
  return worst;
}

/// Central difference of e with respect to var at b.
inline double fd1(const Expr& e, const std::string& var, Binding b, double h) {
  Binding hi = b, lo = b;
  hi[var] += h;
  lo[var] -= h;
  return (evaluate(e, hi) - evaluate(e, lo)) / (2.0 * h);
}

/// One Richardson level on the central difference.
inline double fd1_richardson(const Expr& e, const std::string& var, const Binding& b,
                             double h) {
  const double d_h = fd1(e, var, b, h);
  const double d_h2 = fd1(e, var, b, h / 2.0);
  return (4.0 * d_h2 - d_h) / 3.0;
}

/// Central third-difference stencil.
inline double fd3(const Expr& e, const std::string& var, const Binding& b, double h) {
  auto at = [&](double dx) {
    Binding s = b;
    s[var] += dx;
    return evaluate(e, s);
  };
  return (at(2 * h) - 2 * at(h) + 2 * at(-h) - at(-2 * h)) / (2 * h * h * h);
}

/// One Richardson level on the third difference (kills the h^2 term).
inline double fd3_richardson(const Expr& e, const std::string& var, const Binding& b,
                             double h) {
  return (4.0 * fd3(e, var, b, h / 2.0) - fd3(e, var, b, h)) / 3.0;
}

/// Random multivariate polynomial with integer-ish coefficients, degree <= deg.
inline Expr random_polynomial(const std::vector<std::string>& vars, int deg,
                              std::mt19937& rng, int terms = 5) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> expo(0, deg);
  Expr sum = Expr::constant(0.0);
  for (int t = 0; t < terms; ++t) {
    int c = coef(rng);
    if (c == 0) c = 1;
    Expr mono = Expr::constant(static_cast<double>(c));
    int budget = deg;
    for (const auto& v : vars) {
      const int p = std::min(budget, expo(rng));
      budget -= p;
      if (p > 0) mono = mono * jetcheck::pow(jetcheck::var(v), p);
    }
    sum = sum + mono;
  }
  return sum;
}

}  // namespace testutil
