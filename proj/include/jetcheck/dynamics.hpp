#pragma once

#include <string>
#include <vector>

#include "jetcheck/expr.hpp"
#include "jetcheck/grid.hpp"
#include "jetcheck/jet.hpp"

namespace jetcheck::dynamics {

using jet::JetSection;

/// Dynamical state: a 1-form F_i dx^i + Pi_i^a dx^i_a on the jet manifold.
/// There is no slot for a du^a term. The functional dependence of the
/// components on the jet coordinates is the constitutive law.
class DynamicalForm {
public:
  DynamicalForm(std::vector<Expr> force, std::vector<std::vector<Expr>> stress)
      : force_(std::move(force)), stress_(std::move(stress)) {
    if (stress_.size() != force_.size())
      throw ShapeError("dynamical form: stress rows != force components");
    for (const auto& row : stress_)
      if (row.size() != stress_[0].size())
        throw ShapeError("dynamical form: ragged stress components");
  }

  std::size_t n() const { return force_.size(); }
  std::size_t m() const { return stress_.empty() ? 0 : stress_[0].size(); }
  const Expr& force(std::size_t i) const { return force_[i]; }
  const Expr& stress(std::size_t i, std::size_t a) const { return stress_[i][a]; }

private:
  std::vector<Expr> force_;
  std::vector<std::vector<Expr>> stress_;
};

/// Virtual displacement of a kinematical state: components delta_x^i(u) and
/// delta_x^i_a(u) over the source parameters.
struct Variation {
  std::vector<std::string> source;
  std::vector<Expr> delta_position;              // n
  std::vector<std::vector<Expr>> delta_jet;      // n×m

  std::size_t n() const { return delta_position.size(); }
  std::size_t m() const { return source.size(); }
};

/// Linear connection coefficients omega^i_{j a}(u, x); jet-variable
/// dependence is excluded so that variations built from the connection stay
/// well-posed.
class Connection {
public:
  Connection(std::vector<std::vector<std::vector<Expr>>> coeffs,
             const jet::JetCoords& coords)
      : omega_(std::move(coeffs)) {
    const std::size_t n = coords.n(), m = coords.m();
    if (omega_.size() != n) throw ShapeError("connection: expected n x n x m coefficients");
    std::set<std::string> allowed(coords.source.begin(), coords.source.end());
    allowed.insert(coords.target.begin(), coords.target.end());
    for (const auto& plane : omega_) {
      if (plane.size() != n) throw ShapeError("connection: expected n x n x m coefficients");
      for (const auto& row : plane) {
        if (row.size() != m) throw ShapeError("connection: expected n x n x m coefficients");
        for (const auto& c : row)
          for (const auto& v : free_variables(c))
            if (!allowed.count(v))
              throw ShapeError("connection coefficient depends on '" + v +
                               "', which is not a base coordinate");
      }
    }
  }

  /// omega^i_{j a}
  const Expr& coeff(std::size_t i, std::size_t j, std::size_t a) const {
    return omega_[i][j][a];
  }

private:
  std::vector<std::vector<std::vector<Expr>>> omega_;
};

struct RestrictedForm {
  std::vector<Expr> force;                 // F_i o s
  std::vector<std::vector<Expr>> stress;   // Pi_i^a o s
};

namespace detail {
inline void check_known_variables(const DynamicalForm& phi, const JetSection& s) {
  const auto known = s.coords().all_names();
  auto check = [&](const Expr& e) {
    for (const auto& v : free_variables(e))
      if (!known.count(v))
        throw EvalError(EvalError::Kind::UnboundVariable,
                        "dynamical form references unknown variable '" + v + "'", v);
  };
  for (std::size_t i = 0; i < phi.n(); ++i) {
    check(phi.force(i));
    for (std::size_t a = 0; a < phi.m(); ++a) check(phi.stress(i, a));
  }
}
}  // namespace detail

/// Pull-down of the form along a section: substitutes x^i(u) and x^i_a(u)
/// into every component.
inline RestrictedForm restrict_to(const DynamicalForm& phi, const JetSection& s) {
  if (phi.n() != s.n() || phi.m() != s.m())
    throw ShapeError("restrict_to: form shape does not match section");
  detail::check_known_variables(phi, s);
  RestrictedForm out;
  out.stress.resize(phi.n());
  for (std::size_t i = 0; i < phi.n(); ++i) {
    out.force.push_back(s.restrict_expr(phi.force(i)));
    for (std::size_t a = 0; a < phi.m(); ++a)
      out.stress[i].push_back(s.restrict_expr(phi.stress(i, a)));
  }
  return out;
}

/// Increment of virtual work phi[delta_xi] = F_i dx^i + Pi_i^a dx^i_a paired
/// with the displacement, restricted to the section.
inline Expr virtual_work_density(const DynamicalForm& phi, const Variation& dxi,
                                 const JetSection& s) {
  if (dxi.n() != phi.n() || dxi.m() != phi.m())
    throw ShapeError("virtual_work_density: variation shape does not match form");
  const RestrictedForm r = restrict_to(phi, s);
  Expr acc = Expr::constant(0.0);
  for (std::size_t i = 0; i < phi.n(); ++i) {
    acc = acc + r.force[i] * dxi.delta_position[i];
    for (std::size_t a = 0; a < phi.m(); ++a)
      acc = acc + r.stress[i][a] * dxi.delta_jet[i][a];
  }
  return acc;
}

/// 1-jet prolongation of a variation: delta_x^i_a = d(delta_x^i)/du^a.
inline Variation prolong_variation(std::vector<Expr> delta_x,
                                   std::vector<std::string> source) {
  Variation v;
  v.source = std::move(source);
  v.delta_jet.resize(delta_x.size());
  for (std::size_t i = 0; i < delta_x.size(); ++i)
    for (const auto& u : v.source)
      v.delta_jet[i].push_back(differentiate(delta_x[i], u));
  v.delta_position = std::move(delta_x);
  return v;
}

/// Spencer defect of a variation: delta_x^i_a - d(delta_x^i)/du^a. Zero iff
/// the variation is integrable; the reconstruction delta_xi =
/// prolong_variation(delta_x) + D(xi) holds componentwise.
inline std::vector<std::vector<Expr>> variation_spencer(const Variation& dxi) {
  std::vector<std::vector<Expr>> out(dxi.n());
  for (std::size_t i = 0; i < dxi.n(); ++i)
    for (std::size_t a = 0; a < dxi.m(); ++a)
      out[i].push_back(dxi.delta_jet[i][a] -
                       differentiate(dxi.delta_position[i], dxi.source[a]));
  return out;
}

/// One-form on the target restricted to the section; value of D*phi.
using TargetOneForm = std::vector<Expr>;

/// Adjoint of the Spencer operator along a section:
/// (D*phi)_i = F_i o s - d/du^a (Pi_i^a o s).
/// The divergence is the total derivative through the section's
/// u-dependence; that is the reading under which the virtual-work identity
/// phi[j1 dx] = D*phi[dx] + div(Pi dx) closes exactly.
inline TargetOneForm adjoint(const DynamicalForm& phi, const JetSection& s) {
  const RestrictedForm r = restrict_to(phi, s);
  TargetOneForm out;
  for (std::size_t i = 0; i < phi.n(); ++i) {
    Expr div = Expr::constant(0.0);
    for (std::size_t a = 0; a < phi.m(); ++a)
      div = div + differentiate(r.stress[i][a], s.coords().source[a]);
    out.push_back(r.force[i] - div);
  }
  return out;
}

/// Connection-corrected adjoint:
/// (Dbar*phi)_i = F_i o s - (d_a Pi_i^a - omega^j_{i a} Pi_j^a) o s.
inline TargetOneForm covariant_adjoint(const DynamicalForm& phi, const JetSection& s,
                                       const Connection& omega) {
  const RestrictedForm r = restrict_to(phi, s);
  TargetOneForm out;
  for (std::size_t i = 0; i < phi.n(); ++i) {
    Expr nabla = Expr::constant(0.0);
    for (std::size_t a = 0; a < phi.m(); ++a) {
      Expr corr = Expr::constant(0.0);
      for (std::size_t j = 0; j < phi.n(); ++j)
        corr = corr + s.restrict_expr(omega.coeff(j, i, a)) * r.stress[j][a];
      nabla = nabla + differentiate(r.stress[i][a], s.coords().source[a]) - corr;
    }
    out.push_back(r.force[i] - nabla);
  }
  return out;
}

/// Variation induced by a connection: delta_x^i_a = d_a delta_x^i +
/// omega^i_{j a} delta_x^j, with the coefficients restricted to the section.
inline Variation connection_variation(const std::vector<Expr>& delta_x,
                                      const Connection& omega, const JetSection& s) {
  Variation v = prolong_variation(delta_x, s.coords().source);
  for (std::size_t i = 0; i < v.n(); ++i)
    for (std::size_t a = 0; a < v.m(); ++a) {
      Expr corr = Expr::constant(0.0);
      for (std::size_t j = 0; j < v.n(); ++j)
        corr = corr + s.restrict_expr(omega.coeff(i, j, a)) * delta_x[j];
      v.delta_jet[i][a] = v.delta_jet[i][a] + corr;
    }
  return v;
}

struct BalanceReport {
  GridMax max_residual;
  std::vector<GridMax> per_component;
};

/// Grid maximum of the adjoint components; zero certifies the balance
/// principle F_i = d_a Pi_i^a along the section.
inline BalanceReport balance_residual(const DynamicalForm& phi, const JetSection& s,
                                      const ParamDomain& domain) {
  const TargetOneForm dstar = adjoint(phi, s);
  BalanceReport rep;
  rep.max_residual.value = 0.0;
  for (const Expr& c : dstar) {
    GridMax g = grid_max_abs(c, domain);
    if (g.value >= rep.max_residual.value) {
      // >= so that the argmax is populated even for identically-zero fields
      rep.max_residual = g;
    }
    rep.per_component.push_back(std::move(g));
  }
  return rep;
}

/// Same report against the connection-corrected adjoint.
inline BalanceReport covariant_balance_residual(const DynamicalForm& phi,
                                                const JetSection& s,
                                                const Connection& omega,
                                                const ParamDomain& domain) {
  const TargetOneForm dbar = covariant_adjoint(phi, s, omega);
  BalanceReport rep;
  rep.max_residual.value = 0.0;
  for (const Expr& c : dbar) {
    GridMax g = grid_max_abs(c, domain);
    if (g.value >= rep.max_residual.value) rep.max_residual = g;
    rep.per_component.push_back(std::move(g));
  }
  return rep;
}

struct VirtualWork {
  double interior = 0.0;   // integral of D*phi[delta x]
  double boundary = 0.0;   // flux of Pi_i^a delta_x^i through the faces
  double total = 0.0;      // integral of phi[j1 delta x]
};

/// Total virtual work of an integrable displacement, split into interior
/// and boundary parts. Face u^a = hi contributes +, face u^a = lo
/// contributes -, and interior + boundary reproduces total up to the O(h^2)
/// quadrature defect.
inline VirtualWork total_virtual_work(const DynamicalForm& phi, const JetSection& s,
                                      const std::vector<Expr>& delta_x,
                                      const ParamDomain& domain) {
  if (delta_x.size() != phi.n())
    throw ShapeError("total_virtual_work: delta_x must have one component per target");
  if (domain.dim() != s.m())
    throw ShapeError("total_virtual_work: domain dimension does not match section");

  const RestrictedForm r = restrict_to(phi, s);
  const TargetOneForm dstar = adjoint(phi, s);

  VirtualWork w;
  Expr interior = Expr::constant(0.0);
  for (std::size_t i = 0; i < phi.n(); ++i)
    interior = interior + dstar[i] * delta_x[i];
  w.interior = integrate(interior, domain);

  for (std::size_t a = 0; a < phi.m(); ++a) {
    Expr flux = Expr::constant(0.0);
    for (std::size_t i = 0; i < phi.n(); ++i)
      flux = flux + r.stress[i][a] * delta_x[i];
    w.boundary += integrate_face(flux, domain, a, /*at_hi=*/true) -
                  integrate_face(flux, domain, a, /*at_hi=*/false);
  }

  const Variation prolonged = prolong_variation(delta_x, s.coords().source);
  w.total = integrate(virtual_work_density(phi, prolonged, s), domain);
  return w;
}

}  // namespace jetcheck::dynamics
