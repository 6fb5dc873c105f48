#include <foliage/foliage.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace foliage;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  return 0;
}

std::string random_rational(std::mt19937& rng, int lo, int hi) {
  int n = std::uniform_int_distribution<int>(lo, hi)(rng);
  int d = std::uniform_int_distribution<int>(1, 9)(rng);
  return std::to_string(n) + "/" + std::to_string(d);
}

std::string random_scenario(std::mt19937& rng) {
  std::string s = "[symbols]\n";
  std::vector<std::string> names;
  int nsym = std::uniform_int_distribution<int>(0, 3)(rng);
  const char* values[] = {"sqrt(2)", "sqrt(3)", "2*sqrt(5)", "1/3", "0.125", "-sqrt(7/2)"};
  for (int i = 0; i < nsym; ++i) {
    names.push_back("s" + std::to_string(i));
    s += names.back() + " = " + values[rng() % 6] + "\n";
  }
  auto expr = [&]() {
    std::string e = random_rational(rng, -5, 5);
    for (const auto& n : names)
      if (rng() % 2) e += " + " + random_rational(rng, -3, 3) + "*" + n;
    return e;
  };
  int nmodels = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < nmodels; ++i) {
    s += "[model m" + std::to_string(i) + "]\n";
    int kind = rng() % 3;
    if (kind == 0) s += "orbifold = torus\n";
    if (kind == 1) s += "orbifold = pillowcase\noverride = true\n";
    if (kind == 2) s += "orbifold = custom\nelement = 1 0 0 1 ; 1/2 0\nbasepoint = 1/8, 3/8\n";
    s += "theta = " + expr() + "\nphi = " + expr() + "\n";
    if (rng() % 2) s += "bump = 1/3, 2/5 ; 1/10 ; " + expr() + "\n";
  }
  if (rng() % 2) s += "[tracer]\nseed = 1/7, 2/9\nstep = 0.002\nmax_steps = 5000\n";
  if (rng() % 2) s += "[output]\ndot = g.dot\n";
  if (rng() % 2) s += "[run]\ntarget = m0\nprecision = 64\n";
  return s;
}

}  // namespace

TEST(Scenario, BuiltinExampleOne) {
  auto sc = parse_scenario(builtin_text("pillowcase-ex1"));
  ASSERT_EQ(sc.models.size(), 2u);
  EXPECT_EQ(sc.models[0].orbifold, "pillowcase");
  EXPECT_EQ(sc.models[1].orbifold, "pillowcase");
  EXPECT_EQ(sc.models[0].theta, "1");
  EXPECT_EQ(sc.models[0].phi, "0");
  EXPECT_EQ(sc.models[1].theta, "1*p");
  EXPECT_EQ(sc.models[1].phi, "1*q");
  ASSERT_EQ(sc.surgeries.size(), 1u);
  EXPECT_EQ(sc.surgeries[0].kind, 'A');
  EXPECT_EQ(sc.surgeries[0].x, "1/3");
  EXPECT_EQ(sc.surgeries[0].y, "1/2");
}

TEST(Scenario, SyntaxErrors) {
  EXPECT_THROW(parse_scenario(""), ScenarioError);
  EXPECT_THROW(parse_scenario("# only a comment\n\n"), ScenarioError);
  EXPECT_EQ(error_line("[model T]\ntheta = 1\nphi = r\n"), 3u);
  try {
    parse_scenario("[model T]\ntheta = 1\nphi = r\n");
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("unresolved"), std::string::npos);
  }
  EXPECT_EQ(error_line("theta = 1\n"), 1u);
  EXPECT_EQ(error_line("[model T]\ntheta 1\n"), 2u);
  EXPECT_EQ(error_line("[model T]\ntheta = 1\ntheta = 2\n"), 3u);
  EXPECT_EQ(error_line("[nonsense]\n"), 1u);
  EXPECT_EQ(error_line("[model T]\ncolour = red\n"), 2u);
  EXPECT_EQ(error_line("[model T]\ntheta = 1\n[surgery s]\nleft = T\nright = U\n"), 5u);
  EXPECT_EQ(error_line("[model T]\norbifold = sphere\n"), 2u);
  EXPECT_EQ(error_line("[tracer]\nstep = -1\n"), 2u);
}

TEST(Scenario, NonGroupActionRejected) {
  auto sc = parse_scenario("[model T]\norbifold = custom\nelement = 1 1 0 1 ; 0 0\ntheta = 1\n");
  EXPECT_THROW(build(sc), ScenarioError);
}

TEST(Scenario, BuildErrorsNameTheSection) {
  auto text = builtin_text("pillowcase-ex1");
  auto pos = text.find("tube_levels = 1/3, 1/2");
  text.replace(pos, 22, "tube_levels = 1/2, 1/3");
  try {
    build(parse_scenario(text));
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("surgery 'ex1'"), std::string::npos);
  }
}

TEST(Scenario, BuiltinsRoundTrip) {
  for (const auto& [name, text] : builtin_scenarios()) {
    auto sc = parse_scenario(text);
    EXPECT_EQ(parse_scenario(serialize(sc)), sc) << name;
    EXPECT_EQ(serialize(parse_scenario(serialize(sc))), serialize(sc)) << name;
    EXPECT_NO_THROW(build(sc)) << name;
  }
}

TEST(ScenarioProperty, RandomRoundTrip) {
  std::mt19937 rng(41);
  for (int i = 0; i < 200; ++i) {
    auto text = random_scenario(rng);
    auto sc = parse_scenario(text);
    EXPECT_EQ(parse_scenario(serialize(sc)), sc) << text;
  }
}

TEST(ScenarioProperty, ReportsAreDeterministic) {
  for (const auto& [name, text] : builtin_scenarios()) {
    auto a = build(parse_scenario(text));
    auto b = build(parse_scenario(text));
    EXPECT_EQ(full_report(parse_scenario(text), a.target_model()), full_report(parse_scenario(text), b.target_model()))
        << name;
    EXPECT_EQ(to_dot(a.target_model().graph), to_dot(b.target_model().graph)) << name;
  }
}

TEST(Catalog, ExampleRowsMatch) {
  for (const auto& row : example_rows()) {
    auto o = run_example(row);
    EXPECT_TRUE(o.matches()) << row.scenario;
  }
}

TEST(Catalog, WitnessIffAllCompact) {
  for (const auto& [name, text] : builtin_scenarios()) {
    auto b = build(parse_scenario(text));
    const auto& m = b.target_model();
    auto w = factorization_witness(m);
    EXPECT_EQ(w.has_value(), all_leaves_compact(m)) << name;
    if (w) {
      for (const auto& c : w->checks) EXPECT_TRUE(c.equal()) << name << " " << c.generator;
    }
  }
}

TEST(Svg, Emission) {
  auto svg = render_svg({{{0.1, 0.1}, {0.5, 0.2}, {0.9, 0.3}, {1.1, 0.35}, {1.3, 0.4}}}, {{0.5, 0.5}}, singular_points(pillowcase()));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("width=\"512\""), std::string::npos);
  // The wrap between 0.9 and 1.1 splits the leaf into two runs.
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  EXPECT_EQ(lines, 2u);
  std::size_t squares = 0;
  for (std::size_t p = svg.find("width=\"8\""); p != std::string::npos; p = svg.find("width=\"8\"", p + 1)) ++squares;
  EXPECT_EQ(squares, 4u);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
}
