#include <foliage/forms.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace foliage;

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

SymScalar rat(const TablePtr& t, Rational r) { return SymScalar(t, r); }

}  // namespace

TEST(Forms, CheckBasic) {
  auto t = pq_table();
  EXPECT_TRUE(check_basic(ClosedForm::linear(t, sym(t, "p"), sym(t, "q")), torus()));
  auto dtheta = ClosedForm::linear(t, rat(t, 1), rat(t, 0));
  EXPECT_FALSE(check_basic(dtheta, pillowcase()));
  dtheta.basic_override = true;
  EXPECT_TRUE(check_basic(dtheta, pillowcase()));
  auto v = basic_verdict(dtheta, pillowcase());
  EXPECT_FALSE(v.honest);
  EXPECT_TRUE(v.overridden);
}

TEST(Forms, ZerosOfLinearLayer) {
  auto t = pq_table();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  EXPECT_TRUE(zeros(w).empty());
  w.bumps.push_back({{Rational(1, 4), Rational(1, 4)}, Rational(1, 10), rat(t, Rational(1, 100))});
  EXPECT_TRUE(zeros(w).empty());
  // max|dh| = 8*216/(343*sqrt(7)*R) ~ 19.04 for R = 1/10; amplitude 1 dominates |(p,q)| ~ 2.24.
  w.bumps[0].amplitude = rat(t, 1);
  EXPECT_THROW(zeros(w), PreconditionError);
}

TEST(Forms, ZerosFromPatches) {
  auto t = pq_table();
  auto w = ClosedForm::linear(t, rat(t, 0), rat(t, 0));
  SurgeryPatch p;
  p.id = 0;
  p.zeros = {0, 1};
  p.levels = {rat(t, Rational(1, 3)), rat(t, Rational(1, 2))};
  w.patches.push_back(p);
  auto z = zeros(w);
  ASSERT_EQ(z.size(), 2u);
  for (const auto& x : z) {
    EXPECT_EQ(x.index, 1);
    EXPECT_EQ(x.isotropy_order, 1u);
  }
  p.id = 1;
  p.zeros = {2, 3};
  w.patches.push_back(p);
  EXPECT_EQ(zeros(w).size(), 4u);
}

TEST(Forms, MaxBumpSlopeMatchesSampling) {
  Rational R(1, 5);
  double r = to_double(R);
  double best = 0;
  for (int i = 1; i < 200000; ++i) {
    double s = r * i / 200000.0;
    double u = 1 - s * s / (r * r);
    best = std::max(best, 8 * s / (r * r) * u * u * u);
  }
  EXPECT_NEAR(max_bump_slope(R), best, 1e-6);
}

TEST(Forms, PeriodsAndRank) {
  auto t = pq_table();
  auto T = torus();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  auto ps = periods(w, T);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].generator, "a");
  EXPECT_EQ(ps[0].value, sym(t, "p"));
  EXPECT_EQ(ps[1].value, sym(t, "q"));
  EXPECT_EQ(rank_of_class(w, T), 2u);

  auto d = ClosedForm::linear(t, rat(t, 1), rat(t, 0));
  auto pd = periods(d, T);
  EXPECT_EQ(pd[0].value, rat(t, 1));
  EXPECT_TRUE(pd[1].value.is_zero());

  EXPECT_EQ(rank_of_class(ClosedForm::linear(t, rat(t, 3), rat(t, 0)), T), 1u);
  EXPECT_EQ(rank_of_class(ClosedForm::linear(t, rat(t, 1), rat(t, 2)), T), 1u);

  auto bumped = w;
  bumped.bumps.push_back({{Rational(1, 3), Rational(1, 3)}, Rational(1, 10), rat(t, Rational(1, 200))});
  auto pb = periods(bumped, T);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(pb[i].value, ps[i].value);
}

TEST(Forms, PeriodsRequireBasic) {
  auto t = pq_table();
  auto w = ClosedForm::linear(t, sym(t, "p"), sym(t, "q"));
  EXPECT_THROW(periods(w, pillowcase()), PreconditionError);
  w.basic_override = true;
  auto ps = periods(w, pillowcase());
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_FALSE(ps[2].element_preserves_form);
  EXPECT_EQ(rank_of_class(w, pillowcase()), 2u);
}

TEST(Forms, CirclePeriod) {
  auto t = pq_table();
  auto T = torus();
  EXPECT_EQ(circle_period(periods(ClosedForm::linear(t, rat(t, 2), rat(t, 3)), T)), rat(t, 1));
  EXPECT_EQ(circle_period(periods(ClosedForm::linear(t, rat(t, 4), rat(t, -6)), T)), rat(t, 2));
  EXPECT_EQ(circle_period(periods(ClosedForm::linear(t, sym(t, "p", -2), sym(t, "p", 3)), T)), sym(t, "p"));
  EXPECT_FALSE(circle_period(periods(ClosedForm::linear(t, sym(t, "p"), sym(t, "q")), T)).has_value());
  auto dq = ClosedForm::linear(t, rat(t, 1), rat(t, 0));
  dq.basic_override = true;
  // The k-loop period -1/4 is excluded: -I does not preserve dtheta.
  EXPECT_EQ(circle_period(periods(dq, pillowcase())), rat(t, 1));
}

TEST(Forms, PatchedFormsRejectPathIntegrals) {
  auto t = pq_table();
  auto w = ClosedForm::linear(t, rat(t, 1), rat(t, 0));
  SurgeryPatch p;
  p.levels = {rat(t, 0), rat(t, 1)};
  w.patches.push_back(p);
  EXPECT_THROW(g_path_integral(w, torus(), fundamental_generators(torus())[0].path), PreconditionError);
}

TEST(FormsProperty, RankInvariantUnderBumpsAndScaling) {
  auto t = pq_table();
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> c(-4, 4), k(1, 5);
  auto T = torus();
  for (int i = 0; i < 60; ++i) {
    auto a = sym(t, "p", c(rng)) + rat(t, c(rng));
    auto b = sym(t, "q", c(rng)) + rat(t, c(rng));
    if (a.is_zero() && b.is_zero()) continue;
    auto w = ClosedForm::linear(t, a, b);
    auto r = rank_of_class(w, T);
    Rational s(k(rng) * (c(rng) < 0 ? -1 : 1), k(rng));
    EXPECT_EQ(rank_of_class(ClosedForm::linear(t, a * s, b * s), T), r);
    auto wb = w;
    wb.bumps.push_back({{Rational(1, 2), Rational(1, 3)}, Rational(1, 10), rat(t, Rational(1, 1000))});
    EXPECT_EQ(rank_of_class(wb, T), r);
  }
}
