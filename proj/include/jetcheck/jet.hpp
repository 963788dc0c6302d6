#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "jetcheck/expr.hpp"
#include "jetcheck/grid.hpp"
#include "jetcheck/simplify.hpp"

namespace jetcheck::jet {

/// Names of the first-order jet coordinates (u^a, x^i, x^i_a) in one global
/// chart: source parameters, target positions, and the jet components.
struct JetCoords {
  std::vector<std::string> source;                // size m
  std::vector<std::string> target;                // size n
  std::vector<std::vector<std::string>> jet;      // n rows of m names

  std::size_t m() const { return source.size(); }
  std::size_t n() const { return target.size(); }

  /// Default jet-coordinate naming: "<target>_<source>".
  static JetCoords make(std::vector<std::string> source_names,
                        std::vector<std::string> target_names) {
    JetCoords c;
    c.source = std::move(source_names);
    c.target = std::move(target_names);
    c.jet.resize(c.target.size());
    for (std::size_t i = 0; i < c.target.size(); ++i)
      for (const auto& u : c.source) c.jet[i].push_back(c.target[i] + "_" + u);
    return c;
  }

  static JetCoords make(std::vector<std::string> source_names,
                        std::vector<std::string> target_names,
                        std::vector<std::vector<std::string>> jet_names) {
    JetCoords c;
    c.source = std::move(source_names);
    c.target = std::move(target_names);
    c.jet = std::move(jet_names);
    c.validate();
    return c;
  }

  void validate() const {
    if (jet.size() != target.size())
      throw ShapeError("jet coordinate names: expected one row per target coordinate");
    for (const auto& row : jet)
      if (row.size() != source.size())
        throw ShapeError("jet coordinate names: expected one name per source coordinate");
  }

  /// All names a constraint or dynamical-form component may reference.
  std::set<std::string> all_names() const {
    std::set<std::string> s(source.begin(), source.end());
    s.insert(target.begin(), target.end());
    for (const auto& row : jet) s.insert(row.begin(), row.end());
    return s;
  }
};

namespace detail {
inline void check_over_source(const Expr& e, const std::vector<std::string>& source,
                              const std::string& what) {
  const std::set<std::string> allowed(source.begin(), source.end());
  for (const auto& v : free_variables(e))
    if (!allowed.count(v))
      throw ShapeError(what + ": free variable '" + v +
                       "' is not a source parameter");
}
}  // namespace detail

/// A C^1 map from the source parameters to the target manifold, given by
/// one expression per target coordinate.
class SmoothMap {
public:
  SmoothMap(std::vector<std::string> source_names,
            std::vector<std::string> target_names, std::vector<Expr> components)
      : source_(std::move(source_names)),
        target_(std::move(target_names)),
        comp_(std::move(components)) {
    if (comp_.size() != target_.size())
      throw ShapeError("smooth map: component count != target dimension");
    for (const auto& c : comp_) detail::check_over_source(c, source_, "smooth map");
  }

  std::size_t source_dim() const { return source_.size(); }
  std::size_t target_dim() const { return target_.size(); }
  const std::vector<std::string>& source() const { return source_; }
  const std::vector<std::string>& target() const { return target_; }
  const Expr& component(std::size_t i) const { return comp_[i]; }
  const std::vector<Expr>& components() const { return comp_; }

private:
  std::vector<std::string> source_;
  std::vector<std::string> target_;
  std::vector<Expr> comp_;
};

/// Section of the source projection: u |-> (u^a, x^i(u), x^i_a(u)).
/// Position and jet components are stored symbolically so that every
/// derivative needed downstream is exact.
class JetSection {
public:
  JetSection(JetCoords coords, std::vector<Expr> position,
             std::vector<std::vector<Expr>> jet_components)
      : coords_(std::move(coords)),
        position_(std::move(position)),
        jet_(std::move(jet_components)) {
    coords_.validate();
    if (position_.size() != coords_.n())
      throw ShapeError("jet section: position count != target dimension");
    if (jet_.size() != coords_.n())
      throw ShapeError("jet section: jet component rows != target dimension");
    for (const auto& row : jet_)
      if (row.size() != coords_.m())
        throw ShapeError("jet section: jet component columns != source dimension");
    for (const auto& p : position_)
      detail::check_over_source(p, coords_.source, "jet section position");
    for (const auto& row : jet_)
      for (const auto& j : row)
        detail::check_over_source(j, coords_.source, "jet section jet component");
  }

  const JetCoords& coords() const { return coords_; }
  std::size_t m() const { return coords_.m(); }
  std::size_t n() const { return coords_.n(); }
  const Expr& position(std::size_t i) const { return position_[i]; }
  const Expr& jet_component(std::size_t i, std::size_t a) const { return jet_[i][a]; }

  /// Substitution realizing the pull-down along the section: x^i -> x^i(u),
  /// x^i_a -> x^i_a(u).
  std::map<std::string, Expr> pulldown() const {
    std::map<std::string, Expr> repl;
    for (std::size_t i = 0; i < n(); ++i) {
      repl.emplace(coords_.target[i], position_[i]);
      for (std::size_t a = 0; a < m(); ++a)
        repl.emplace(coords_.jet[i][a], jet_[i][a]);
    }
    return repl;
  }

  /// Restricts an expression over the jet coordinates to this section.
  Expr restrict_expr(const Expr& e) const { return substitute(e, pulldown()); }

private:
  JetCoords coords_;
  std::vector<Expr> position_;
  std::vector<std::vector<Expr>> jet_;
};

/// A 1-form on the source valued in target-vector components: entries
/// alpha[i][a](u). This is the value type of the Spencer operator and of
/// contact-form pullbacks.
struct CotargetField {
  std::vector<std::vector<Expr>> comp;  // n rows of m entries

  std::size_t n() const { return comp.size(); }
  std::size_t m() const { return comp.empty() ? 0 : comp[0].size(); }

  static CotargetField zeros(std::size_t n, std::size_t m) {
    CotargetField f;
    f.comp.assign(n, std::vector<Expr>(m, Expr::constant(0.0)));
    return f;
  }

  std::vector<Expr> flat() const {
    std::vector<Expr> out;
    for (const auto& row : comp) out.insert(out.end(), row.begin(), row.end());
    return out;
  }
};

/// Antisymmetric 2-form field on the source, valued in target components:
/// entries curv[i][a][b] with curv[i][a][b] = -curv[i][b][a].
struct Curvature2Form {
  std::vector<std::vector<std::vector<Expr>>> comp;  // n × m × m

  std::vector<Expr> flat_upper() const {
    std::vector<Expr> out;
    for (const auto& plane : comp)
      for (std::size_t a = 0; a < plane.size(); ++a)
        for (std::size_t b = a + 1; b < plane.size(); ++b) out.push_back(plane[a][b]);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Operations

/// 1-jet prolongation: the section whose jet components are the true
/// partial derivatives of the map. Its Spencer defect vanishes identically.
inline JetSection prolong(const SmoothMap& f) {
  JetCoords coords = JetCoords::make(f.source(), f.target());
  std::vector<std::vector<Expr>> jets(f.target_dim());
  for (std::size_t i = 0; i < f.target_dim(); ++i)
    for (std::size_t a = 0; a < f.source_dim(); ++a)
      jets[i].push_back(differentiate(f.component(i), f.source()[a]));
  return JetSection(std::move(coords), f.components(), std::move(jets));
}

/// Same prolongation, keeping caller-chosen jet coordinate names.
inline JetSection prolong(const SmoothMap& f, const JetCoords& coords) {
  std::vector<std::vector<Expr>> jets(f.target_dim());
  for (std::size_t i = 0; i < f.target_dim(); ++i)
    for (std::size_t a = 0; a < f.source_dim(); ++a)
      jets[i].push_back(differentiate(f.component(i), f.source()[a]));
  return JetSection(coords, f.components(), std::move(jets));
}

/// Spencer operator: Ds[i][a] = x^i_a(u) - x^i_{,a}(u), jet component minus
/// true partial. Zero iff the section is integrable.
inline CotargetField spencer(const JetSection& s) {
  CotargetField out;
  out.comp.resize(s.n());
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t a = 0; a < s.m(); ++a)
      out.comp[i].push_back(s.jet_component(i, a) -
                            differentiate(s.position(i), s.coords().source[a]));
  return out;
}

/// Pullback of the contact forms: s*Theta[i][a] = x^i_{,a}(u) - x^i_a(u),
/// the negation of the Spencer defect.
inline CotargetField contact_pullback(const JetSection& s) {
  CotargetField out;
  out.comp.resize(s.n());
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t a = 0; a < s.m(); ++a)
      out.comp[i].push_back(differentiate(s.position(i), s.coords().source[a]) -
                            s.jet_component(i, a));
  return out;
}

/// Curvature of the contact pullback: comp[i][a][b] = (x^i_{a,b} - x^i_{b,a})/2.
/// Identically zero for a one-dimensional source.
inline Curvature2Form contact_curvature(const JetSection& s) {
  Curvature2Form out;
  out.comp.assign(s.n(), std::vector<std::vector<Expr>>(
                             s.m(), std::vector<Expr>(s.m(), Expr::constant(0.0))));
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t a = 0; a < s.m(); ++a)
      for (std::size_t b = 0; b < s.m(); ++b) {
        if (a == b) continue;
        Expr c = Expr::constant(0.5) *
                 (differentiate(s.jet_component(i, a), s.coords().source[b]) -
                  differentiate(s.jet_component(i, b), s.coords().source[a]));
        out.comp[i][a][b] = c;
      }
  return out;
}

/// Exterior derivative of a cotarget field, as the independent route to the
/// same 2-form: comp[i][a][b] = (beta[i][b],_a - beta[i][a],_b)/2.
inline Curvature2Form exterior_derivative(const CotargetField& beta,
                                          const std::vector<std::string>& source) {
  Curvature2Form out;
  const std::size_t n = beta.n(), m = beta.m();
  out.comp.assign(n, std::vector<std::vector<Expr>>(
                         m, std::vector<Expr>(m, Expr::constant(0.0))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        out.comp[i][a][b] = Expr::constant(0.5) *
                            (differentiate(beta.comp[i][b], source[a]) -
                             differentiate(beta.comp[i][a], source[b]));
      }
  return out;
}

struct IntegrabilityReport {
  bool integrable = false;
  double tol = 0.0;
  GridMax max_residual;
};

/// Grid-max verdict on |Ds| against a tolerance. A report, not a proof.
inline IntegrabilityReport is_integrable(const JetSection& s, const ParamDomain& domain,
                                         double tol = 1e-9) {
  if (!(tol > 0.0)) throw ShapeError("is_integrable: tol must be positive");
  const auto fields = spencer(s).flat();
  IntegrabilityReport rep;
  rep.tol = tol;
  rep.max_residual = grid_max_abs(fields, domain);
  rep.integrable = rep.max_residual.value <= tol;
  return rep;
}

/// Defect against a prescribed anholonomy: contact_pullback(s) - alpha.
/// Zero certifies the generalized integrability condition s*Theta^i = alpha^i.
inline CotargetField anholonomy_residual(const JetSection& s, const CotargetField& alpha) {
  if (alpha.n() != s.n() || alpha.m() != s.m())
    throw ShapeError("anholonomy_residual: field shape does not match section");
  CotargetField out = contact_pullback(s);
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t a = 0; a < s.m(); ++a)
      out.comp[i][a] = out.comp[i][a] - alpha.comp[i][a];
  return out;
}

/// Algebraic constraints C_rho(u^a, x^i, x^i_a) = c_rho on the jet manifold.
struct ConstraintSet {
  std::vector<Expr> functions;
  std::vector<double> levels;

  ConstraintSet(std::vector<Expr> fns, std::vector<double> cs)
      : functions(std::move(fns)), levels(std::move(cs)) {
    if (functions.size() != levels.size())
      throw ShapeError("constraint set: one level per constraint function");
  }
};

struct ConstraintReport {
  GridMax residual;
  bool holonomic = false;  // syntactic: no jet variables after simplification
};

inline std::vector<ConstraintReport> constraint_residual(const ConstraintSet& cs,
                                                         const JetSection& s,
                                                         const ParamDomain& domain) {
  // Jet coordinate names of the owning section, for the holonomicity test.
  std::set<std::string> jet_names;
  for (const auto& row : s.coords().jet) jet_names.insert(row.begin(), row.end());
  const std::set<std::string> known = s.coords().all_names();

  std::vector<ConstraintReport> out;
  for (std::size_t r = 0; r < cs.functions.size(); ++r) {
    for (const auto& v : free_variables(cs.functions[r]))
      if (!known.count(v))
        throw EvalError(EvalError::Kind::UnboundVariable,
                        "constraint references unknown variable '" + v + "'", v);
    ConstraintReport rep;
    const Expr restricted = s.restrict_expr(cs.functions[r]) - Expr::constant(cs.levels[r]);
    rep.residual = grid_max_abs(restricted, domain);
    rep.holonomic = true;
    for (const auto& v : free_variables(simplify(cs.functions[r])))
      if (jet_names.count(v)) rep.holonomic = false;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace jetcheck::jet
