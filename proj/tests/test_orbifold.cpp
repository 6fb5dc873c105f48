#include <foliage/forms.hpp>
#include <foliage/orbifold.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <random>
#include <optional>
#include <set>

using namespace foliage;
using namespace oracle;

namespace {

TablePtr pq_table() {
  auto t = std::make_shared<SymbolTable>();
  t->add("p", "sqrt(2)");
  t->add("q", "sqrt(3)");
  return t;
}

SymScalar sym(const TablePtr& t, const char* n, Rational c = 1) {
  return SymScalar::symbol(t, *t->index_of(n), c);
}

OrbifoldPresentation half_shift() {
  AffineMap s;
  s.b1 = Rational(1, 2);
  return make_orbifold("shift", GroupAction({AffineMap{}, s}));
}

OrbifoldPresentation swap_quotient() {
  AffineMap s;
  s.A = {0, 1, 1, 0};
  return {"swap", GroupAction({AffineMap{}, s}), {Rational(1, 8), Rational(3, 8)}};
}


GPath single(std::vector<Vec2> seg) {
  GPath p;
  p.segments.push_back(std::move(seg));
  return p;
}

}  // namespace

TEST(Orbifold, PillowcaseOrbitAndIsotropy) {
  auto Q = pillowcase();
  auto o = orbit({0, 0}, Q);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0], TorusPoint(0, 0));
  auto o2 = orbit({Rational(1, 4), Rational(1, 3)}, Q);
  EXPECT_EQ(o2, (std::vector<TorusPoint>{{Rational(1, 4), Rational(1, 3)}, {Rational(3, 4), Rational(2, 3)}}));
  EXPECT_EQ(isotropy_order({Rational(1, 2), Rational(1, 2)}, Q), 2u);
  EXPECT_EQ(isotropy_order({Rational(1, 4), Rational(1, 3)}, Q), 1u);
  auto T = torus();
  EXPECT_EQ(orbit({Rational(2, 5), Rational(1, 7)}, T).size(), 1u);
  EXPECT_EQ(isotropy_order({Rational(2, 5), Rational(1, 7)}, T), 1u);
}

TEST(Orbifold, PillowcaseHasFourConePoints) {
  auto pts = singular_points(pillowcase());
  std::vector<TorusPoint> expected{{0, 0}, {0, Rational(1, 2)}, {Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_EQ(pts, expected);
  for (const auto& x : pts) EXPECT_EQ(isotropy_order(x, pillowcase()), 2u);
  EXPECT_TRUE(singular_points(torus()).empty());
  EXPECT_TRUE(singular_points(half_shift()).empty());
}

TEST(Orbifold, GroupValidation) {
  AffineMap shear;
  shear.A = {1, 1, 0, 1};
  EXPECT_THROW(GroupAction({AffineMap{}, shear}), ScenarioError);  // infinite order: not closed
  AffineMap bad;
  bad.A = {2, 0, 0, 1};
  EXPECT_THROW(GroupAction({bad}), ScenarioError);
  AffineMap quarter;
  quarter.A = {0, -1, 1, 0};
  EXPECT_THROW(GroupAction({quarter}), ScenarioError);  // needs its powers listed
  AffineMap q2, q3;
  q2.A = {-1, 0, 0, -1};
  q3.A = {0, 1, -1, 0};
  GroupAction z4({quarter, q2, q3});
  EXPECT_EQ(z4.size(), 4u);
  EXPECT_EQ(z4.inverse(1), 3u);
  EXPECT_EQ(z4.compose(1, 1), 2u);
}

TEST(Orbifold, FundamentalGenerators) {
  EXPECT_EQ(fundamental_generators(torus()).size(), 2u);
  auto Q = fundamental_generators(pillowcase());
  ASSERT_EQ(Q.size(), 3u);
  EXPECT_EQ(Q[0].id, "a");
  EXPECT_EQ(Q[1].id, "b");
  EXPECT_EQ(Q[2].id, "k1");
  EXPECT_EQ(Q[2].element, 1u);
  EXPECT_EQ(fundamental_generators(half_shift()).size(), 3u);
  for (const auto& O : {torus(), pillowcase(), half_shift(), swap_quotient()})
    for (const auto& g : fundamental_generators(O)) {
      EXPECT_NO_THROW(validate(g.path, O));
      EXPECT_TRUE(g.path.is_loop()) << g.id;
      EXPECT_EQ(TorusPoint(g.path.start()), O.basepoint);
    }
}

TEST(Orbifold, PathIntegralExamples) {
  auto t = pq_table();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  auto T = torus();
  auto gens = fundamental_generators(T);
  EXPECT_EQ(g_path_integral(w, T, gens[0].path), sym(t, "p"));
  EXPECT_EQ(g_path_integral(w, T, gens[1].path), sym(t, "q"));
  EXPECT_TRUE(g_path_integral(w, T, constant_path({Rational(1, 3), 0})).is_zero());

  // On the pillowcase the k-loop runs from x0 = (1/8,1/8) to (-1/8,-1/8).
  auto Q = pillowcase();
  w.basic_override = true;
  auto qg = fundamental_generators(Q);
  EXPECT_EQ(g_path_integral(w, Q, qg[2].path), (sym(t, "p") + sym(t, "q")) * Rational(-1, 4));
}

TEST(Orbifold, ConcatExamples) {
  auto T = torus();
  auto gens = fundamental_generators(T);
  const auto& a = gens[0].path;
  const auto& b = gens[1].path;
  auto ac = normalize(concat(a, constant_path(T.basepoint.lift())), T);
  EXPECT_EQ(ac.segments, a.segments);
  EXPECT_TRUE(ac.arrows.empty());

  auto ab = normalize(concat(a, b), T);
  ASSERT_EQ(ab.segments.size(), 1u);
  Vec2 x0 = T.basepoint.lift();
  EXPECT_EQ(ab.segments[0], (std::vector<Vec2>{x0, x0 + Vec2{1, 0}, x0 + Vec2{1, 1}}));

  auto t = pq_table();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  auto aa = concat(a, inverse(a, T));
  EXPECT_TRUE(g_path_integral(w, T, aa).is_zero());

  GPath off{{{{Rational(1, 3), 0}}}, {}};
  EXPECT_THROW(concat(a, off), PreconditionError);
}

TEST(Orbifold, NormalizeFoldsConstantSegments) {
  auto Q = pillowcase();
  Vec2 x{Rational(1, 5), Rational(1, 7)};
  GPath p{{{x}, {Vec2{-x.x, -x.y}}, {x}}, {1, 1}};
  validate(p, Q);
  auto n = normalize(p, Q);
  // [x] (-I) [-x] (-I) [x]: the middle constant folds to the unit arrow.
  ASSERT_EQ(n.segments.size(), 1u);
  EXPECT_TRUE(n.arrows.empty());
}

TEST(Orbifold, InvalidPathsRejected) {
  auto Q = pillowcase();
  GPath p{{{Vec2{Rational(1, 5), 0}}, {Vec2{Rational(1, 5), 0}}}, {1}};
  EXPECT_THROW(validate(p, Q), PreconditionError);
  GPath q{{{Vec2{0, 0}}}, {1}};
  EXPECT_THROW(validate(q, Q), PreconditionError);
}

TEST(OrbifoldProperty, OrbitSizesAndGridCount) {
  AffineMap quarter, q2, q3;
  quarter.A = {0, -1, 1, 0};
  q2.A = {-1, 0, 0, -1};
  q3.A = {0, 1, -1, 0};
  OrbifoldPresentation z4{"z4", GroupAction({quarter, q2, q3}), {Rational(1, 8), Rational(1, 4)}};
  for (const auto& O : {torus(), pillowcase(), half_shift(), swap_quotient(), z4}) {
    std::set<TorusPoint> reps;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        TorusPoint x{Rational(i, 12), Rational(j, 12)};
        auto o = orbit(x, O);
        EXPECT_EQ(O.action.size() % o.size(), 0u);
        EXPECT_EQ(o.size() * isotropy_order(x, O), O.action.size());
        reps.insert(o.front());
        for (const auto& g : O.action.elements()) EXPECT_EQ(isotropy_order(g.apply(x), O), isotropy_order(x, O));
      }
    std::size_t total = 0;
    for (const auto& r : reps) total += orbit(r, O).size();
    EXPECT_EQ(total, 144u) << O.name;
  }
}

TEST(OrbifoldProperty, IntegralIsAdditiveUnderConcat) {
  auto t = pq_table();
  std::mt19937 rng(3);
  for (const auto& O : {torus(), pillowcase(), half_shift()}) {
    auto w = ClosedForm::linear(t, sym(t, "p") + SymScalar(t, Rational(1, 3)), sym(t, "q", -2));
    w.basic_override = true;
    w.bumps.push_back({{Rational(1, 4), Rational(1, 3)}, Rational(1, 10), SymScalar(t, Rational(1, 100))});
    for (int i = 0; i < 40; ++i) {
      GPath p = random_path(rng, O);
      GPath q = random_path(rng, O, p.end() + Vec2{static_cast<int>(rng() % 3) - 1, 0});
      auto pq = concat(p, q);
      EXPECT_EQ(g_path_integral(w, O, pq), g_path_integral(w, O, p) + g_path_integral(w, O, q));
      EXPECT_EQ(g_path_integral(w, O, normalize(pq, O)), g_path_integral(w, O, pq));
    }
  }
}

TEST(OrbifoldProperty, CohomologousFormsDifferByEndpointValues) {
  auto t = pq_table();
  std::mt19937 rng(9);
  for (const auto& O : {torus(), pillowcase()}) {
    auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
    w.basic_override = true;
    auto w2 = w;
    w2.bumps.push_back({{Rational(1, 3), Rational(1, 5)}, Rational(1, 20), sym(t, "p", Rational(1, 50))});
    w2.bumps.push_back({{Rational(3, 5), Rational(1, 2)}, Rational(1, 20), SymScalar(t, Rational(-1, 70))});
    validate_bumps(w2, O);
    for (int i = 0; i < 40; ++i) {
      GPath p = random_path(rng, O);
      SymScalar diff = g_path_integral(w2, O, p) - g_path_integral(w, O, p);
      SymScalar expected =
          bump_primitive(w2, O, TorusPoint(p.end())) - bump_primitive(w2, O, TorusPoint(p.start()));
      EXPECT_EQ(diff, expected);
      GPath loop = close_loop(p);
      ASSERT_TRUE(loop.is_loop());
      EXPECT_TRUE((g_path_integral(w2, O, loop) - g_path_integral(w, O, loop)).is_zero());
    }
  }
}

TEST(OrbifoldProperty, PullbackConsistencyForBasicForms) {
  auto t = pq_table();
  std::mt19937 rng(21);
  // The swap (theta,phi) -> (phi,theta) preserves p dtheta + p dphi.
  auto O = swap_quotient();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "p"));
  w.bumps.push_back({{Rational(1, 5), Rational(1, 2)}, Rational(1, 10), SymScalar(t, Rational(1, 40))});
  ASSERT_TRUE(basic_verdict(w, O).honest);
  auto S = half_shift();
  auto w2 = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  ASSERT_TRUE(basic_verdict(w2, S).honest);
  for (int i = 0; i < 50; ++i) {
    std::vector<Vec2> seg{rand_vec(rng), rand_vec(rng), rand_vec(rng)};
    GPath s;
    s.segments.push_back(seg);
    for (const auto& g : O.action.elements())
      EXPECT_EQ(g_path_integral(w, O, single(image(g, seg))), g_path_integral(w, O, s));
    for (const auto& g : S.action.elements())
      EXPECT_EQ(g_path_integral(w2, S, single(image(g, seg))), g_path_integral(w2, S, s));
  }
}
