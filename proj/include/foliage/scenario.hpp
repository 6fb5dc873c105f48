#pragma once

// Line-oriented scenario files:
//
//   [symbols]            name = value        (1/3, 0.25, sqrt(2), 3*sqrt(5))
//   [model NAME]         orbifold, element, basepoint, theta, phi, override, bump
//   [surgery NAME]       kind, left, right, {left,right}_{region,window,center},
//                        right_shift, tube_levels
//   [tracer]             seed, step, max_steps, tolerance, epsilon, coverage
//   [output]             dot, svg
//   [run]                target, precision
//
// Values are stored in canonical text so that parse(serialize(s)) == s.

#include <foliage/error.hpp>
#include <foliage/forms.hpp>
#include <foliage/orbifold.hpp>
#include <foliage/scalar.hpp>
#include <foliage/surgery.hpp>

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace foliage {

struct SymbolDecl {
  std::string name;
  std::string value;
  bool operator==(const SymbolDecl&) const = default;
};

struct BumpDecl {
  TorusPoint center;
  Rational radius;
  std::string amplitude;
  bool operator==(const BumpDecl&) const = default;
};

struct ModelDecl {
  std::string name;
  std::string orbifold = "torus";
  std::vector<std::string> elements;  // custom actions
  std::optional<TorusPoint> basepoint;
  std::string theta = "0";
  std::string phi = "0";
  bool override_basic = false;
  std::vector<BumpDecl> bumps;
  std::size_t line = 0;
  bool operator==(const ModelDecl& o) const {
    return name == o.name && orbifold == o.orbifold && elements == o.elements && basepoint == o.basepoint &&
           theta == o.theta && phi == o.phi && override_basic == o.override_basic && bumps == o.bumps;
  }
};

struct DiskDecl {
  std::string region;
  std::string lo = "0";
  std::string hi = "1";
  std::optional<TorusPoint> center;
  bool operator==(const DiskDecl&) const = default;
};

struct SurgeryDecl {
  std::string name;
  char kind = 'A';
  std::string left;
  std::string right;
  DiskDecl left_disk;
  DiskDecl right_disk;
  std::string right_shift = "0";
  std::string x;
  std::string y;
  std::size_t line = 0;
  bool operator==(const SurgeryDecl& o) const {
    return name == o.name && kind == o.kind && left == o.left && right == o.right && left_disk == o.left_disk &&
           right_disk == o.right_disk && right_shift == o.right_shift && x == o.x && y == o.y;
  }
};

struct TracerDecl {
  std::optional<TorusPoint> seed;
  TraceConfig config;
  bool operator==(const TracerDecl& o) const {
    const auto& a = config;
    const auto& b = o.config;
    return seed == o.seed && a.step == b.step && a.max_steps == b.max_steps && a.tolerance == b.tolerance &&
           a.epsilon == b.epsilon && a.coverage == b.coverage;
  }
};

struct Scenario {
  std::vector<SymbolDecl> symbols;
  std::vector<ModelDecl> models;
  std::vector<SurgeryDecl> surgeries;
  TracerDecl tracer;
  std::optional<std::string> dot;
  std::optional<std::string> svg;
  std::optional<std::string> target;
  std::optional<unsigned> precision;
  bool operator==(const Scenario&) const = default;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_point(const TorusPoint& p) { return to_string(p.theta) + ", " + to_string(p.phi); }

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(what, line_); }

  Rational rational(std::string_view s) const {
    auto r = try_parse_rational(s);
    if (!r) fail("expected a rational number, got '" + std::string(s) + "'");
    return *r;
  }

  TorusPoint point(std::string_view s) const {
    auto parts = split(s, ',');
    if (parts.size() != 2) fail("expected 'theta, phi', got '" + std::string(s) + "'");
    return {rational(parts[0]), rational(parts[1])};
  }

  std::pair<std::string, std::string> pair(std::string_view s, const TablePtr& t) const {
    auto parts = split(s, ',');
    if (parts.size() != 2) fail("expected two comma-separated values, got '" + std::string(s) + "'");
    return {expression(parts[0], t), expression(parts[1], t)};
  }

  std::string expression(std::string_view s, const TablePtr& t) const {
    try {
      return render(parse_expression(s, t));
    } catch (const ScenarioError& e) {
      fail(e.what());
    }
  }

  double real(std::string_view s) const {
    double v = 0;
    auto str = std::string(trim(s));
    auto r = std::from_chars(str.data(), str.data() + str.size(), v);
    if (r.ec != std::errc() || r.ptr != str.data() + str.size()) fail("expected a number, got '" + str + "'");
    return v;
  }

  std::size_t natural(std::string_view s) const {
    auto str = std::string(trim(s));
    if (!all_digits(str)) fail("expected a natural number, got '" + str + "'");
    return std::stoull(str);
  }

  bool boolean(std::string_view s) const {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail("expected true or false, got '" + std::string(s) + "'");
  }

  AffineMap affine(std::string_view s) const {
    auto halves = split(s, ';');
    if (halves.size() != 2) fail("expected 'a11 a12 a21 a22 ; b1 b2'");
    std::istringstream lin(halves[0]), tr(halves[1]);
    AffineMap g;
    for (auto& a : g.A)
      if (!(lin >> a)) fail("expected four integer matrix entries");
    std::string b1, b2, extra;
    if (!(tr >> b1 >> b2) || (tr >> extra)) fail("expected two translation entries");
    g.b1 = rational(b1);
    g.b2 = rational(b2);
    return g;
  }

 private:
  std::size_t line_;
};

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  auto table = std::make_shared<SymbolTable>();
  enum class Sec { None, Symbols, Model, Surgery, Tracer, Output, Run } sec = Sec::None;
  std::size_t lineno = 0;
  bool any = false;
  std::map<std::string, std::size_t> names;  // models and surgeries
  std::map<std::string, bool> seen_keys;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    any = true;
    detail::LineParser P(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') P.fail("unterminated section header");
      auto inner = std::string(detail::trim(line.substr(1, line.size() - 2)));
      auto space = inner.find(' ');
      std::string head = inner.substr(0, space);
      std::string arg = space == std::string::npos ? "" : std::string(detail::trim(std::string_view(inner).substr(space)));
      seen_keys.clear();
      if (head == "symbols") sec = Sec::Symbols;
      else if (head == "tracer") sec = Sec::Tracer;
      else if (head == "output") sec = Sec::Output;
      else if (head == "run") sec = Sec::Run;
      else if (head == "model" || head == "surgery") {
        if (!SymbolTable::valid_name(arg)) P.fail("section '" + head + "' needs a valid name");
        if (names.count(arg)) P.fail("duplicate model or surgery name '" + arg + "'");
        names[arg] = lineno;
        if (head == "model") {
          sec = Sec::Model;
          sc.models.push_back({});
          sc.models.back().name = arg;
          sc.models.back().line = lineno;
        } else {
          sec = Sec::Surgery;
          sc.surgeries.push_back({});
          sc.surgeries.back().name = arg;
          sc.surgeries.back().line = lineno;
        }
      } else {
        P.fail("unknown section '" + head + "'");
      }
      if (head != "model" && head != "surgery" && !arg.empty()) P.fail("section '" + head + "' takes no name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) P.fail("expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) P.fail("empty key or value");
    bool repeatable = sec == Sec::Symbols || key == "element" || key == "bump";
    if (!repeatable && seen_keys[key]) P.fail("duplicate key '" + key + "'");
    seen_keys[key] = true;

    switch (sec) {
      case Sec::None: P.fail("key outside of any section");
      case Sec::Symbols: {
        try {
          table->add(key, value);
        } catch (const ScenarioError& e) {
          P.fail(e.what());
        }
        sc.symbols.push_back({key, table->symbol(table->size() - 1).value.render()});
        break;
      }
      case Sec::Model: {
        auto& m = sc.models.back();
        if (key == "orbifold") {
          if (value != "torus" && value != "pillowcase" && value != "custom")
            P.fail("orbifold must be torus, pillowcase or custom");
          m.orbifold = value;
        } else if (key == "element") {
          m.elements.push_back(to_string(P.affine(value)));
        } else if (key == "basepoint") {
          m.basepoint = TorusPoint(P.point(value));
        } else if (key == "theta") {
          m.theta = P.expression(value, table);
        } else if (key == "phi") {
          m.phi = P.expression(value, table);
        } else if (key == "override") {
          m.override_basic = P.boolean(value);
        } else if (key == "bump") {
          auto parts = detail::split(value, ';');
          if (parts.size() != 3) P.fail("expected 'theta, phi ; radius ; amplitude'");
          m.bumps.push_back({TorusPoint(P.point(parts[0])), P.rational(parts[1]), P.expression(parts[2], table)});
        } else {
          P.fail("unknown model key '" + key + "'");
        }
        break;
      }
      case Sec::Surgery: {
        auto& s = sc.surgeries.back();
        auto ref = [&](const std::string& v) {
          if (!names.count(v) || v == s.name) P.fail("unresolved reference to model '" + v + "'");
          return v;
        };
        if (key == "kind") {
          if (value != "A" && value != "B" && value != "C") P.fail("kind must be A, B or C");
          s.kind = value[0];
        } else if (key == "left") {
          s.left = ref(value);
        } else if (key == "right") {
          s.right = ref(value);
        } else if (key == "left_region" || key == "right_region") {
          (key[0] == 'l' ? s.left_disk : s.right_disk).region = value;
        } else if (key == "left_window" || key == "right_window") {
          auto [lo, hi] = P.pair(value, table);
          auto& d = key[0] == 'l' ? s.left_disk : s.right_disk;
          d.lo = lo;
          d.hi = hi;
        } else if (key == "left_center" || key == "right_center") {
          (key[0] == 'l' ? s.left_disk : s.right_disk).center = TorusPoint(P.point(value));
        } else if (key == "right_shift") {
          s.right_shift = P.expression(value, table);
        } else if (key == "tube_levels") {
          auto [x, y] = P.pair(value, table);
          s.x = x;
          s.y = y;
        } else {
          P.fail("unknown surgery key '" + key + "'");
        }
        break;
      }
      case Sec::Tracer: {
        auto& c = sc.tracer.config;
        if (key == "seed") sc.tracer.seed = TorusPoint(P.point(value));
        else if (key == "step") c.step = P.real(value);
        else if (key == "max_steps") c.max_steps = P.natural(value);
        else if (key == "tolerance") c.tolerance = P.real(value);
        else if (key == "epsilon") c.epsilon = P.real(value);
        else if (key == "coverage") c.coverage = P.real(value);
        else P.fail("unknown tracer key '" + key + "'");
        if (!(c.step > 0 && c.tolerance > 0 && c.epsilon > 0 && c.epsilon <= 1 && c.coverage > 0 && c.coverage <= 1))
          P.fail("tracer settings out of range");
        break;
      }
      case Sec::Output:
        if (key == "dot") sc.dot = value;
        else if (key == "svg") sc.svg = value;
        else P.fail("unknown output key '" + key + "'");
        break;
      case Sec::Run:
        if (key == "target") sc.target = value;
        else if (key == "precision") sc.precision = static_cast<unsigned>(P.natural(value));
        else P.fail("unknown run key '" + key + "'");
        break;
    }
  }
  if (!any) throw ScenarioError("syntax error: empty scenario", lineno == 0 ? 1 : lineno);
  for (const auto& s : sc.surgeries) {
    detail::LineParser P(s.line);
    if (s.left.empty() || s.right.empty()) P.fail("surgery '" + s.name + "' needs left and right");
    if (s.left_disk.region.empty() || s.right_disk.region.empty())
      P.fail("surgery '" + s.name + "' needs left_region and right_region");
    if (s.x.empty()) P.fail("surgery '" + s.name + "' needs tube_levels");
    if (names.at(s.left) > s.line || names.at(s.right) > s.line)
      P.fail("surgery '" + s.name + "' refers to a later section");
  }
  for (const auto& m : sc.models)
    if (m.orbifold == "custom" && m.elements.empty())
      throw ScenarioError("custom orbifold '" + m.name + "' lists no elements", m.line);
  if (sc.models.empty()) throw ScenarioError("scenario declares no model", lineno);
  if (sc.target && !names.count(*sc.target)) throw ScenarioError("unresolved run target '" + *sc.target + "'");
  return sc;
}

inline std::string serialize(const Scenario& sc) {
  std::ostringstream os;
  if (!sc.symbols.empty()) {
    os << "[symbols]\n";
    for (const auto& s : sc.symbols) os << s.name << " = " << s.value << "\n";
  }
  for (const auto& m : sc.models) {
    os << "\n[model " << m.name << "]\n";
    os << "orbifold = " << m.orbifold << "\n";
    for (const auto& e : m.elements) os << "element = " << e << "\n";
    if (m.basepoint) os << "basepoint = " << detail::format_point(*m.basepoint) << "\n";
    os << "theta = " << m.theta << "\n";
    os << "phi = " << m.phi << "\n";
    if (m.override_basic) os << "override = true\n";
    for (const auto& b : m.bumps)
      os << "bump = " << detail::format_point(b.center) << " ; " << to_string(b.radius) << " ; " << b.amplitude << "\n";
  }
  for (const auto& s : sc.surgeries) {
    os << "\n[surgery " << s.name << "]\n";
    os << "kind = " << s.kind << "\n";
    os << "left = " << s.left << "\n";
    os << "right = " << s.right << "\n";
    auto disk = [&](const char* side, const DiskDecl& d) {
      os << side << "_region = " << d.region << "\n";
      os << side << "_window = " << d.lo << ", " << d.hi << "\n";
      if (d.center) os << side << "_center = " << detail::format_point(*d.center) << "\n";
    };
    disk("left", s.left_disk);
    disk("right", s.right_disk);
    os << "right_shift = " << s.right_shift << "\n";
    os << "tube_levels = " << s.x << ", " << s.y << "\n";
  }
  const TraceConfig def;
  const auto& c = sc.tracer.config;
  if (sc.tracer.seed || !(TracerDecl{std::nullopt, c} == TracerDecl{std::nullopt, def})) {
    os << "\n[tracer]\n";
    if (sc.tracer.seed) os << "seed = " << detail::format_point(*sc.tracer.seed) << "\n";
    os << "step = " << detail::format_double(c.step) << "\n";
    os << "max_steps = " << c.max_steps << "\n";
    os << "tolerance = " << detail::format_double(c.tolerance) << "\n";
    os << "epsilon = " << detail::format_double(c.epsilon) << "\n";
    os << "coverage = " << detail::format_double(c.coverage) << "\n";
  }
  if (sc.dot || sc.svg) {
    os << "\n[output]\n";
    if (sc.dot) os << "dot = " << *sc.dot << "\n";
    if (sc.svg) os << "svg = " << *sc.svg << "\n";
  }
  if (sc.target || sc.precision) {
    os << "\n[run]\n";
    if (sc.target) os << "target = " << *sc.target << "\n";
    if (sc.precision) os << "precision = " << *sc.precision << "\n";
  }
  return os.str();
}

/// Models built from a scenario, in declaration order.
struct BuiltScenario {
  TablePtr table;
  std::vector<std::string> order;
  std::map<std::string, ModelPtr> models;
  std::string target;

  const FoliationModel& target_model() const { return *models.at(target); }
};

inline OrbifoldPresentation build_orbifold(const ModelDecl& m) {
  OrbifoldPresentation O;
  if (m.orbifold == "torus") {
    O = torus();
  } else if (m.orbifold == "pillowcase") {
    O = pillowcase();
  } else {
    std::vector<AffineMap> els;
    for (const auto& e : m.elements) els.push_back(detail::LineParser(m.line).affine(e));
    try {
      O = make_orbifold("custom", GroupAction(els));
    } catch (const ScenarioError& e) {
      throw ScenarioError(std::string("model '") + m.name + "': " + e.what(), m.line);
    }
  }
  if (m.basepoint) O.basepoint = *m.basepoint;
  return O;
}

/// Builds every model and surgery. Module precondition failures are
/// reported against the declaring section.
inline BuiltScenario build(const Scenario& sc) {
  BuiltScenario b;
  auto table = std::make_shared<SymbolTable>();
  for (const auto& s : sc.symbols) table->add(s.name, s.value);
  if (sc.precision) table->set_precision(*sc.precision);
  b.table = table;
  auto expr = [&](const std::string& s, std::size_t line) {
    try {
      return parse_expression(s, table);
    } catch (const ScenarioError& e) {
      throw ScenarioError(e.what(), line);
    }
  };
  for (const auto& m : sc.models) {
    auto O = build_orbifold(m);
    auto w = ClosedForm::linear(table, expr(m.theta, m.line), expr(m.phi, m.line));
    w.basic_override = m.override_basic;
    for (const auto& bump : m.bumps) w.bumps.push_back({bump.center, bump.radius, expr(bump.amplitude, m.line)});
    try {
      b.models[m.name] = std::make_shared<FoliationModel>(base_model(m.name, O, w));
    } catch (const PreconditionError& e) {
      throw PreconditionError("model '" + m.name + "': " + e.what());
    }
    b.order.push_back(m.name);
  }
  for (const auto& s : sc.surgeries) {
    SurgerySpec spec;
    spec.name = s.name;
    spec.kind = s.kind;
    spec.left = b.models.at(s.left);
    spec.right = b.models.at(s.right);
    spec.left_disk = {s.left_disk.region, expr(s.left_disk.lo, s.line), expr(s.left_disk.hi, s.line),
                      s.left_disk.center};
    spec.right_disk = {s.right_disk.region, expr(s.right_disk.lo, s.line), expr(s.right_disk.hi, s.line),
                       s.right_disk.center};
    spec.right_shift = expr(s.right_shift, s.line);
    spec.x = expr(s.x, s.line);
    spec.y = expr(s.y, s.line);
    try {
      b.models[s.name] = std::make_shared<FoliationModel>(connected_sum(spec));
    } catch (const PreconditionError& e) {
      throw PreconditionError("surgery '" + s.name + "': " + e.what());
    }
    b.order.push_back(s.name);
  }
  if (sc.target) b.target = *sc.target;
  else if (!sc.surgeries.empty()) b.target = sc.surgeries.back().name;
  else b.target = sc.models.front().name;
  return b;
}

}  // namespace foliage
