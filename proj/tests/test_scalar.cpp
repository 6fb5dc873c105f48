#include <foliage/scalar.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <random>

using namespace foliage;
using namespace oracle;

namespace {

TablePtr pq_table() {
  auto t = std::make_shared<SymbolTable>();
  t->add("p", "sqrt(2)");
  t->add("q", "sqrt(3)");
  return t;
}

SymScalar one(const TablePtr& t, Rational r = 1) { return SymScalar(t, r); }
SymScalar sym(const TablePtr& t, const char* n, Rational c = 1) {
  return SymScalar::symbol(t, *t->index_of(n), c);
}


SymScalar random_scalar(std::mt19937& rng, const TablePtr& t) {
  std::uniform_int_distribution<int> coin(0, 2), num(-5, 5), den(1, 4);
  SymScalar s(t);
  for (std::size_t i = 0; i < t->size(); ++i)
    if (coin(rng) != 0) s += SymScalar::symbol(t, i, Rational(num(rng), den(rng)));
  return s;
}

TablePtr four_symbols() {
  auto t = std::make_shared<SymbolTable>();
  t->add("s2", "sqrt(2)");
  t->add("s3", "sqrt(3)");
  t->add("s5", "sqrt(5)");
  return t;
}

}  // namespace

TEST(Scalar, AddExamples) {
  auto t = pq_table();
  EXPECT_EQ(one(t, Rational(3, 2)) + one(t, Rational(1, 2)), one(t, 2));
  EXPECT_EQ(sym(t, "p") + SymScalar(t), sym(t, "p"));
  EXPECT_TRUE((sym(t, "p") + (-sym(t, "p"))).is_zero());
  EXPECT_TRUE((sym(t, "p") - sym(t, "p")).terms().empty());
}

TEST(Scalar, MismatchedTablesRejected) {
  auto a = pq_table(), b = pq_table();
  EXPECT_THROW(sym(a, "p") + sym(b, "p"), PreconditionError);
}

TEST(Scalar, IsRational) {
  auto t = pq_table();
  EXPECT_TRUE(is_rational(one(t, Rational(3, 2))));
  EXPECT_FALSE(is_rational(one(t, Rational(3, 2)) + sym(t, "p")));
  EXPECT_TRUE(is_rational(SymScalar(t)));
}

TEST(Scalar, QRankExamples) {
  auto t = pq_table();
  EXPECT_EQ(q_rank(std::vector{sym(t, "p"), sym(t, "q")}), 2u);
  EXPECT_EQ(q_rank(std::vector{one(t, 2), one(t, 3)}), 1u);
  EXPECT_EQ(q_rank(std::vector{sym(t, "p"), sym(t, "p", 2), one(t)}), 2u);
}

TEST(Scalar, SignExamples) {
  auto t = std::make_shared<SymbolTable>();
  t->add("p", "1.414");
  EXPECT_EQ(sign(SymScalar(t)), Sign::zero);
  EXPECT_EQ(sign(one(t) + sym(t, "p")), Sign::pos);
  EXPECT_EQ(sign(one(t, -2) + sym(t, "p")), Sign::neg);
}

TEST(Scalar, SignOfNearCancellation) {
  auto t = std::make_shared<SymbolTable>();
  t->add("r", "sqrt(2)");
  // 99/70 is a continued-fraction convergent of sqrt(2); gap is about 7e-5.
  EXPECT_EQ(sign(sym(t, "r") - one(t, Rational(99, 70))), Sign::neg);
  EXPECT_EQ(sign(sym(t, "r") - one(t, Rational(665857, 470832))), Sign::neg);
}

TEST(Scalar, PrecisionExhausted) {
  auto t = std::make_shared<SymbolTable>();
  t->add("r", "sqrt(2)");
  t->add("r2", "sqrt(2)");
  t->set_precision(32);
  EXPECT_THROW(sign(sym(t, "r") - sym(t, "r2")), NumericError);
}

TEST(Scalar, RenderAndParse) {
  auto t = pq_table();
  auto v = one(t, Rational(3, 2)) + sym(t, "q", -2) + sym(t, "p");
  EXPECT_EQ(render(v), "3/2 + 1*p + -2*q");
  EXPECT_EQ(render(SymScalar(t)), "0");
  EXPECT_EQ(render(sym(t, "q")), "1*q");
  EXPECT_EQ(parse_expression(render(v), t), v);
  EXPECT_EQ(parse_expression("3/2 + p - 2*q", t), v);
  EXPECT_EQ(parse_expression("-q/2", t), sym(t, "q", Rational(-1, 2)));
  EXPECT_THROW(parse_expression("r", t), ScenarioError);
  EXPECT_THROW(parse_expression("", t), ScenarioError);
}

TEST(Scalar, SymbolTableInvariants) {
  SymbolTable t;
  EXPECT_EQ(t.symbol(0).name, "one");
  t.add("a", "2");
  EXPECT_THROW(t.add("a", "3"), ScenarioError);
  EXPECT_THROW(t.add("b", "0"), ScenarioError);
  EXPECT_THROW(t.add("9x", "1"), ScenarioError);
}

TEST(Scalar, RationalParsing) {
  EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(parse_rational(" 7 "), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), ScenarioError);
  EXPECT_THROW(parse_rational("abc"), ScenarioError);
}

TEST(Scalar, Ratio) {
  auto t = pq_table();
  EXPECT_EQ(ratio(sym(t, "p", 3), sym(t, "p", 2)), Rational(3, 2));
  EXPECT_FALSE(ratio(sym(t, "p"), sym(t, "q")).has_value());
  EXPECT_FALSE(ratio(one(t) + sym(t, "p"), one(t)).has_value());
}

TEST(Scalar, LatticeMembership) {
  auto t = pq_table();
  std::vector gens{sym(t, "p"), sym(t, "q")};
  PeriodLattice lat(gens);
  EXPECT_TRUE(lat.contains(sym(t, "p", 3) + sym(t, "q", -2)));
  EXPECT_FALSE(lat.contains(one(t, Rational(1, 7))));
  EXPECT_FALSE(lat.contains(sym(t, "p", Rational(1, 2))));
  EXPECT_TRUE(lat.contains(SymScalar(t)));

  // Z*2 + Z*3 = Z, but Z*4 + Z*6 = 2Z.
  PeriodLattice z(std::vector<SymScalar>{one(t, 2), one(t, 3)});
  EXPECT_TRUE(z.contains(one(t, 1)));
  PeriodLattice even(std::vector<SymScalar>{one(t, 4), one(t, 6)});
  EXPECT_FALSE(even.contains(one(t, 1)));
  EXPECT_TRUE(even.contains(one(t, -10)));

  // Generators (1/2)(1+p), (1/2)(1-p): the lattice contains 1 and p but not 1/2.
  PeriodLattice skew(std::vector<SymScalar>{(one(t) + sym(t, "p")) * Rational(1, 2),
                                 (one(t) - sym(t, "p")) * Rational(1, 2)});
  EXPECT_TRUE(skew.contains(one(t)));
  EXPECT_TRUE(skew.contains(sym(t, "p")));
  EXPECT_FALSE(skew.contains(one(t, Rational(1, 2))));
}

TEST(ScalarProperty, GroupLaws) {
  auto t = four_symbols();
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto a = random_scalar(rng, t), b = random_scalar(rng, t), c = random_scalar(rng, t);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + SymScalar(t), a);
    EXPECT_TRUE((a + (-a)).is_zero());
    EXPECT_EQ(sign(a) == Sign::zero, a.is_zero());
    EXPECT_EQ(sign(-a), -sign(a));
  }
}

TEST(ScalarProperty, QRankMatchesMinorOracle) {
  auto t = four_symbols();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(1, 6), num(-4, 4);
  for (int i = 0; i < 100; ++i) {
    std::vector<SymScalar> vals;
    int n = len(rng);
    for (int k = 0; k < n; ++k) vals.push_back(random_scalar(rng, t));
    std::vector<std::vector<Rational>> m;
    for (const auto& v : vals) {
      std::vector<Rational> row;
      for (std::size_t s = 0; s < t->size(); ++s) row.push_back(v.coeff(s));
      m.push_back(row);
    }
    std::size_t r = q_rank(vals);
    EXPECT_EQ(r, minor_rank(m));

    auto shuffled = vals;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto& v : shuffled) {
      int k = 0;
      while (k == 0) k = num(rng);
      v = v * Rational(k, 3);
    }
    EXPECT_EQ(q_rank(shuffled), r);
  }
}

TEST(ScalarProperty, LatticeContainsIntegerCombinations) {
  auto t = four_symbols();
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(1, 4), num(-6, 6);
  for (int i = 0; i < 100; ++i) {
    std::vector<SymScalar> gens;
    int n = len(rng);
    for (int k = 0; k < n; ++k) gens.push_back(random_scalar(rng, t));
    PeriodLattice lat(gens);
    SymScalar v(t);
    for (const auto& g : gens) v += g * Rational(num(rng));
    EXPECT_TRUE(lat.contains(v));
  }
}
