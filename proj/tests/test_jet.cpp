#include <catch2/catch_amalgamated.hpp>

#include "jetcheck/jet.hpp"
#include "jetcheck/parse.hpp"
#include "support.hpp"

using namespace jetcheck;
using namespace jetcheck::jet;

namespace {

JetSection curve_section(const std::string& x, const std::string& v) {
  return JetSection(JetCoords::make({"t"}, {"x"}, {{"v"}}), {parse(x)},
                    {{parse(v)}});
}

ParamDomain unit_interval(int samples = 21) {
  return ParamDomain({{"t", 0.0, 1.0, samples}});
}

bool all_zero(const CotargetField& f) {
  for (const auto& row : f.comp)
    for (const auto& c : row)
      if (!simplify(c).is_const(0.0)) return false;
  return true;
}

}  // namespace

TEST_CASE("prolongation differentiates the map") {
  SmoothMap f({"u"}, {"x"}, {parse("u^2")});
  JetSection s = prolong(f);
  CHECK(evaluate(s.jet_component(0, 0), {{"u", 3.0}}) == Catch::Approx(6.0));
  CHECK(all_zero(spencer(s)));
}

TEST_CASE("prolongation of a constant map has zero jet") {
  SmoothMap f({"u"}, {"x"}, {parse("4")});
  JetSection s = prolong(f);
  CHECK(s.jet_component(0, 0).is_const(0.0));
}

TEST_CASE("two-parameter prolongation and grid residual") {
  SmoothMap f({"u1", "u2"}, {"x"}, {parse("u1*u2")});
  JetSection s = prolong(f);
  CHECK(evaluate(s.jet_component(0, 0), {{"u1", 0.0}, {"u2", 5.0}}) == 5.0);
  CHECK(evaluate(s.jet_component(0, 1), {{"u1", 7.0}, {"u2", 0.0}}) == 7.0);
  ParamDomain grid({{"u1", 0.0, 1.0, 5}, {"u2", 0.0, 1.0, 5}});
  auto rep = is_integrable(s, grid, 1e-10);
  CHECK(rep.integrable);
  CHECK(rep.max_residual.value <= 1e-15);
}

TEST_CASE("Spencer defect of offset and non-derivative sections") {
  SECTION("constant offset") {
    JetSection s = curve_section("t^2", "2*t + 0.5");
    CotargetField d = spencer(s);
    Expr c = simplify(d.comp[0][0]);
    CHECK(c.is_const(0.5));
  }
  SECTION("sinusoidal jet over flat position") {
    JetSection s = curve_section("0", "sin(t)");
    CotargetField d = spencer(s);
    const double half_pi = 1.5707963267948966;
    CHECK(evaluate(d.comp[0][0], {{"t", half_pi}}) == Catch::Approx(1.0));
  }
}

TEST_CASE("contact pullback is minus the Spencer defect") {
  std::mt19937 rng(5);
  auto samples = testutil::random_bindings({"t"}, 25, 17);
  JetSection s = curve_section("t^3 - t", "sin(t) + t^2");
  CotargetField ds = spencer(s);
  CotargetField pb = contact_pullback(s);
  CHECK(testutil::max_rel_gap(simplify(pb.comp[0][0] + ds.comp[0][0]),
                              Expr::constant(0.0), samples) == 0.0);
  JetSection s2 = curve_section("t^2", "2*t + 0.5");
  CHECK(simplify(contact_pullback(s2).comp[0][0]).is_const(-0.5));
}

TEST_CASE("contact curvature: integrable sections and the m=1 case") {
  SmoothMap f({"u1", "u2"}, {"x"}, {parse("u1^2*u2 + u2^3")});
  Curvature2Form curv = contact_curvature(prolong(f));
  for (const Expr& c : curv.flat_upper()) CHECK(simplify(c).is_const(0.0));

  JetSection line = curve_section("t^2", "t");
  Curvature2Form c1 = contact_curvature(line);
  CHECK(c1.flat_upper().empty());
}

TEST_CASE("contact curvature equals the exterior derivative of the pullback") {
  // Non-integrable: x^1_1 = u2^2, x^1_2 = 0 over position u1 + u2.
  JetCoords coords = JetCoords::make({"u1", "u2"}, {"x"});
  JetSection s(coords, {parse("u1 + u2")}, {{parse("u2^2"), parse("0")}});
  Curvature2Form direct = contact_curvature(s);
  Curvature2Form viad = jet::exterior_derivative(contact_pullback(s), coords.source);

  ParamDomain grid({{"u1", 0.0, 1.0, 5}, {"u2", 0.0, 1.0, 5}});
  auto ds = direct.flat_upper();
  auto vs = viad.flat_upper();
  REQUIRE(ds.size() == vs.size());
  for (std::size_t k = 0; k < ds.size(); ++k) {
    GridMax gap = grid_max_abs(ds[k] - vs[k], grid);
    CHECK(gap.value <= 1e-12);
  }
  // Component (1,1,2) is (d_2 x^1_1 - d_1 x^1_2)/2 = u2.
  CHECK(evaluate(direct.comp[0][0][1], {{"u1", 0.0}, {"u2", 0.75}}) ==
        Catch::Approx(0.75));
}

TEST_CASE("integrability verdicts at tolerance") {
  ParamDomain dom = unit_interval();
  SECTION("prolonged section passes") {
    SmoothMap f({"t"}, {"x"}, {parse("t^3")});
    auto rep = is_integrable(prolong(f), dom, 1e-10);
    CHECK(rep.integrable);
    CHECK(rep.max_residual.value == 0.0);
  }
  SECTION("offset 0.5 fails and reports the argmax") {
    auto rep = is_integrable(curve_section("t^2", "2*t + 0.5"), dom, 1e-9);
    CHECK_FALSE(rep.integrable);
    CHECK(rep.max_residual.value == Catch::Approx(0.5));
    CHECK(rep.max_residual.argmax.count("t") == 1);
  }
  SECTION("sub-tolerance offset passes") {
    auto rep = is_integrable(curve_section("t^2", "2*t + 1/1000000000000"), dom, 1e-9);
    CHECK(rep.integrable);
  }
}

TEST_CASE("anholonomy residual generalizes integrability") {
  JetSection s = curve_section("0", "sin(t)");
  auto samples = testutil::random_bindings({"t"}, 30, 3);

  SECTION("alpha = 0 reduces to the contact pullback") {
    CotargetField alpha = CotargetField::zeros(1, 1);
    CotargetField r = anholonomy_residual(s, alpha);
    CHECK(testutil::max_rel_gap(r.comp[0][0], contact_pullback(s).comp[0][0],
                                samples) <= 1e-15);
  }
  SECTION("alpha = pullback certifies itself") {
    CotargetField r = anholonomy_residual(s, contact_pullback(s));
    CHECK(simplify(r.comp[0][0]).is_const(0.0));
  }
  SECTION("rotating-frame style anholonomy") {
    CotargetField alpha;
    alpha.comp = {{parse("-sin(t)")}};
    CotargetField r = anholonomy_residual(s, alpha);
    CHECK(testutil::max_rel_gap(r.comp[0][0], Expr::constant(0.0), samples) <= 1e-15);
  }
  SECTION("shape mismatch throws") {
    CHECK_THROWS_AS(anholonomy_residual(s, CotargetField::zeros(2, 1)), ShapeError);
  }
}

TEST_CASE("constraint residuals and holonomicity flags") {
  SECTION("unit circle: holonomic, residual zero") {
    JetCoords coords = JetCoords::make({"t"}, {"x", "y"}, {{"vx"}, {"vy"}});
    JetSection s(coords, {parse("cos(t)"), parse("sin(t)")},
                 {{parse("-sin(t)")}, {parse("cos(t)")}});
    ConstraintSet cs({parse("x^2 + y^2")}, {1.0});
    auto reps = constraint_residual(cs, s, unit_interval());
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].residual.value <= 1e-12);
    CHECK(reps[0].holonomic);
  }
  SECTION("velocity constraint: non-holonomic, residual zero") {
    JetSection s = curve_section("t^2", "2*t");
    ConstraintSet cs({parse("v - 2*t")}, {0.0});
    auto reps = constraint_residual(cs, s, unit_interval());
    CHECK(reps[0].residual.value <= 1e-14);
    CHECK_FALSE(reps[0].holonomic);
  }
  SECTION("dispersion constraint on a wave phase section") {
    JetCoords coords =
        JetCoords::make({"t", "x1", "x2", "x3"}, {"theta"},
                        {{"omega", "k1", "k2", "k3"}});
    SmoothMap phase({"t", "x1", "x2", "x3"}, {"theta"},
                    {parse("5*t + 3*x1 + 4*x2")});
    JetSection s = prolong(phase, coords);
    ConstraintSet cs({parse("omega^2 - (k1^2 + k2^2 + k3^2)")}, {0.0});
    ParamDomain dom({{"t", 0.0, 1.0, 3},
                     {"x1", 0.0, 1.0, 3},
                     {"x2", 0.0, 1.0, 3},
                     {"x3", 0.0, 1.0, 3}});
    auto reps = constraint_residual(cs, s, dom);
    CHECK(reps[0].residual.value <= 1e-12);
    CHECK_FALSE(reps[0].holonomic);
  }
  SECTION("unknown variable in a constraint is rejected") {
    JetSection s = curve_section("t", "1");
    ConstraintSet cs({parse("q - 1")}, {0.0});
    CHECK_THROWS_AS(constraint_residual(cs, s, unit_interval()), EvalError);
  }
}

TEST_CASE("prolongation annihilation on random polynomial maps") {
  std::mt19937 rng(4242);
  for (int round = 0; round < 6; ++round) {
    const int m = 1 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> src, tgt;
    for (int a = 0; a < m; ++a) src.push_back("u" + std::to_string(a + 1));
    for (int i = 0; i < n; ++i) tgt.push_back("x" + std::to_string(i + 1));
    std::vector<Expr> comps;
    for (int i = 0; i < n; ++i) comps.push_back(testutil::random_polynomial(src, 3, rng));
    JetSection s = prolong(SmoothMap(src, tgt, comps));
    std::vector<AxisDomain> axes;
    for (const auto& u : src) axes.push_back({u, -1.0, 1.0, 5});
    auto rep = is_integrable(s, ParamDomain(axes), 1e-12);
    CHECK(rep.integrable);
  }
}
