#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "jetcheck/errors.hpp"

namespace jetcheck {

/// Exact rational number, used for power exponents so that differentiation
/// of f^r stays closed under the expression grammar.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // always > 0, gcd(num, den) == 1

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool is_integer() const { return den == 1; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational operator-() const { return Rational(-num, den); }
  Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
  Rational operator-(const Rational& o) const { return Rational(num * o.den - o.num * den, den * o.den); }
  Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
  Rational operator/(const Rational& o) const {
    if (o.num == 0) throw Error("rational division by zero");
    return Rational(num * o.den, den * o.num);
  }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

/// Nearest small-denominator rational to a double (continued fractions).
/// Used to accept decimal exponents such as 2.5 or 0.1 in parsed formulas.
/// Fails if no denominator <= max_den reproduces x to within tol.
inline bool rational_from_double(double x, Rational& out,
                                 std::int64_t max_den = 1000000,
                                 double tol = 1e-12) {
  double a = x;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const auto ai = static_cast<std::int64_t>(std::floor(a));
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= tol * (1.0 + std::abs(x))) {
      out = Rational(p1, q1);
      return true;
    }
    const double frac = a - static_cast<double>(ai);
    if (frac < 1e-15) break;
    a = 1.0 / frac;
  }
  return false;
}

}  // namespace jetcheck
