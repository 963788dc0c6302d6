#pragma once

#include <string>
#include <vector>

#include "jetcheck/dynamics.hpp"
#include "jetcheck/jet.hpp"

namespace jetcheck::lagrange {

using dynamics::DynamicalForm;
using dynamics::TargetOneForm;
using dynamics::VirtualWork;
using jet::JetCoords;
using jet::JetSection;
using jet::SmoothMap;

/// Scalar density L(u^a, x^i, x^i_a) on the jet manifold. Explicit
/// u-dependence is allowed, which covers driven systems at no cost.
class LagrangianDensity {
public:
  LagrangianDensity(Expr density, JetCoords coords)
      : density_(std::move(density)), coords_(std::move(coords)) {
    coords_.validate();
    const auto known = coords_.all_names();
    for (const auto& v : free_variables(density_))
      if (!known.count(v))
        throw ShapeError("Lagrangian references unknown variable '" + v + "'");
  }

  const Expr& density() const { return density_; }
  const JetCoords& coords() const { return coords_; }

private:
  Expr density_;
  JetCoords coords_;
};

/// phi = dL: F_i = dL/dx^i and Pi_i^a = dL/dx^i_a, symbolically.
inline DynamicalForm exterior_of_lagrangian(const LagrangianDensity& L) {
  const JetCoords& c = L.coords();
  std::vector<Expr> force;
  std::vector<std::vector<Expr>> stress(c.n());
  for (std::size_t i = 0; i < c.n(); ++i) {
    force.push_back(differentiate(L.density(), c.target[i]));
    for (std::size_t a = 0; a < c.m(); ++a)
      stress[i].push_back(differentiate(L.density(), c.jet[i][a]));
  }
  return DynamicalForm(std::move(force), std::move(stress));
}

/// Variational derivative along a section, computed directly:
/// dL/dx^i o s - d_a(dL/dx^i_a o s), with d_a the total derivative.
/// Coincides with adjoint(exterior_of_lagrangian(L), s); the agreement is
/// tested, not assumed.
inline TargetOneForm variational_derivative(const LagrangianDensity& L,
                                            const JetSection& s) {
  const JetCoords& c = L.coords();
  if (c.n() != s.n() || c.m() != s.m())
    throw ShapeError("variational_derivative: coordinate shapes do not match");
  TargetOneForm out;
  for (std::size_t i = 0; i < c.n(); ++i) {
    Expr term = s.restrict_expr(differentiate(L.density(), c.target[i]));
    for (std::size_t a = 0; a < c.m(); ++a) {
      Expr momentum = s.restrict_expr(differentiate(L.density(), c.jet[i][a]));
      term = term - differentiate(momentum, c.source[a]);
    }
    out.push_back(term);
  }
  return out;
}

/// Action functional S[x] = integral of L(j1 x) over the domain
/// (composite trapezoid).
inline double action(const LagrangianDensity& L, const SmoothMap& f,
                     const ParamDomain& domain) {
  const JetSection s = jet::prolong(f, L.coords());
  return integrate(s.restrict_expr(L.density()), domain);
}

/// First variation of the action: total virtual work of phi = dL along j1 f.
inline VirtualWork first_variation(const LagrangianDensity& L, const SmoothMap& f,
                                   const std::vector<Expr>& delta_x,
                                   const ParamDomain& domain) {
  const JetSection s = jet::prolong(f, L.coords());
  return dynamics::total_virtual_work(exterior_of_lagrangian(L), s, delta_x, domain);
}

/// Central finite-difference directional derivative of the action in the
/// direction delta_x: (S[x + eps dx] - S[x - eps dx]) / (2 eps). Gradient
/// cross-check for the first variation (for boundary-vanishing delta_x).
inline double action_directional_fd(const LagrangianDensity& L, const SmoothMap& f,
                                    const std::vector<Expr>& delta_x,
                                    const ParamDomain& domain, double eps = 1e-5) {
  if (delta_x.size() != f.target_dim())
    throw ShapeError("action_directional_fd: delta_x shape mismatch");
  auto shifted = [&](double step) {
    std::vector<Expr> comps;
    for (std::size_t i = 0; i < f.target_dim(); ++i)
      comps.push_back(f.component(i) + Expr::constant(step) * delta_x[i]);
    return SmoothMap(f.source(), f.target(), std::move(comps));
  };
  const double plus = action(L, shifted(eps), domain);
  const double minus = action(L, shifted(-eps), domain);
  return (plus - minus) / (2.0 * eps);
}

}  // namespace jetcheck::lagrange
