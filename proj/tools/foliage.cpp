#include <foliage/foliage.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace foliage;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kScenario = 2;
constexpr int kNumeric = 3;

std::string load(const std::string& arg) {
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) return builtin_text(arg.substr(prefix.size()));
  std::ifstream in(arg);
  if (!in) throw ScenarioError("cannot read scenario file '" + arg + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write '" + path + "'");
  out << text;
}

TorusPoint parse_seed(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw ScenarioError("--seed expects theta,phi");
  auto a = try_parse_rational(s.substr(0, comma));
  auto b = try_parse_rational(s.substr(comma + 1));
  if (!a || !b) throw ScenarioError("--seed expects rational theta,phi");
  return {*a, *b};
}

int run_examples(std::ostream& out) {
  int bad = 0;
  for (const auto& row : example_rows()) {
    auto o = run_example(row);
    out << (o.matches() ? "[match]    " : "[MISMATCH] ") << row.scenario << ": transitive=" << (o.transitive ? "yes" : "no")
        << ", harmonic=" << to_string(o.harmonic) << ", compact families=" << o.mix.compact_regular
        << ", noncompact classes=" << o.mix.noncompact_regular
        << ", compact singular components=" << o.mix.compact_singular_components << " | stated: " << row.stated << "\n";
    bad += !o.matches();
  }
  out << (example_rows().size() - bad) << "/" << example_rows().size() << " catalog rows match\n";
  return bad ? kMismatch : kOk;
}

struct Options {
  std::string command;
  std::string scenario;
  std::string dot;
  std::string svg;
  std::string seed;
  std::size_t steps = 0;
  unsigned precision = 0;
};

int run(const Options& opt, std::ostream& out) {
  if (opt.command == "examples") return run_examples(out);
  if (opt.scenario.empty()) throw ScenarioError("command '" + opt.command + "' needs a scenario file or builtin:NAME");
  Scenario sc = parse_scenario(load(opt.scenario));
  if (opt.precision) sc.precision = opt.precision;
  if (opt.steps) sc.tracer.config.max_steps = opt.steps;
  if (!opt.seed.empty()) sc.tracer.seed = parse_seed(opt.seed);
  std::string dot_path = !opt.dot.empty() ? opt.dot : sc.dot.value_or("");
  std::string svg_path = !opt.svg.empty() ? opt.svg : sc.svg.value_or("");

  BuiltScenario built = build(sc);
  const FoliationModel& m = built.target_model();
  const std::string& c = opt.command;

  if (c == "periods") {
    out << report_header(m) << report_basicness(m) << report_periods(m);
  } else if (c == "classify") {
    out << report_header(m);
    if (sc.tracer.seed && !m.is_sum()) {
      const Piece& p = m.pieces[0];
      auto leaf = classify_leaf(p.form, p.orbifold, *sc.tracer.seed);
      out << "classify_leaf at " << to_string(*sc.tracer.seed) << ": " << to_string(leaf.kind) << " (" << leaf.locus
          << ") [criterion: compact iff the linear coefficients span a Q-space of dimension <= 1]\n";
    }
    out << report_zeros(m) << report_leaves(m);
  } else if (c == "decompose") {
    out << report_header(m) << report_decomposition(m);
  } else if (c == "graph") {
    out << report_header(m) << report_graph(m.graph) << report_calabi(m.graph);
    if (dot_path.empty()) out << to_dot(m.graph);
  } else if (c == "transitivity") {
    out << report_header(m) << report_transitivity(transitivity(m));
  } else if (c == "harmonic") {
    out << report_header(m) << report_transitivity(transitivity(m)) << report_harmonicity(m);
  } else if (c == "trace") {
    if (m.is_sum()) throw PreconditionError("trace: tracing across surgery tubes is not supported; target a base model");
    const Piece& p = m.pieces[0];
    TorusPoint seed = sc.tracer.seed.value_or(p.orbifold.basepoint);
    auto r = trace_leaf(p.form, p.orbifold, seed, sc.tracer.config);
    out << report_header(m) << "trace from " << to_string(seed) << ": " << to_string(r.verdict);
    if (r.verdict == TraceVerdict::Closed) out << ", period length " << detail::format_double(r.period_length);
    if (r.verdict == TraceVerdict::DenseEvidence)
      out << ", covered fraction " << detail::format_double(r.covered_fraction) << " at epsilon "
          << detail::format_double(sc.tracer.config.epsilon);
    out << ", return error " << detail::format_double(r.return_error) << ", steps " << r.steps;
    if (!r.note.empty()) out << " (" << r.note << ")";
    out << " [criterion: closed when the trace returns to an image of the seed within "
        << detail::format_double(sc.tracer.config.tolerance) << "; dense evidence when grid coverage reaches "
        << detail::format_double(sc.tracer.config.coverage) << "]\n";
    if (!svg_path.empty()) {
      write_file(svg_path, render_svg({r.polyline}, {}, singular_points(p.orbifold)));
      out << "svg: " << svg_path << "\n";
    }
    if (r.verdict == TraceVerdict::Inconclusive)
      throw NumericError("trace: inconclusive after " + std::to_string(r.steps) + " steps");
  } else if (c == "surgery") {
    out << full_report(sc, m);
  } else {
    throw ScenarioError("unknown command '" + c + "'");
  }
  if (!dot_path.empty()) {
    write_file(dot_path, to_dot(m.graph));
    out << "dot: " << dot_path << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leaves, graphs and transitivity of closed 1-forms on torus quotients"};
  Options opt;
  app.add_option("command", opt.command,
                 "periods | classify | decompose | graph | transitivity | harmonic | trace | surgery | examples")
      ->required();
  app.add_option("scenario", opt.scenario, "scenario file or builtin:NAME");
  app.add_option("--dot", opt.dot, "write the foliation graph in DOT format");
  app.add_option("--svg", opt.svg, "write the traced leaf as SVG");
  app.add_option("--seed", opt.seed, "seed point theta,phi (rationals)");
  app.add_option("--steps", opt.steps, "tracer step limit");
  app.add_option("--precision", opt.precision, "decimal-digit ceiling for sign decisions");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kScenario;
  }
  std::ostringstream out;
  try {
    int code = run(opt, out);
    std::cout << out.str();
    return code;
  } catch (const NumericError& e) {
    std::cout << out.str();
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const Error& e) {
    std::cout << out.str();
    std::cerr << "error: " << e.what() << "\n";
    return kScenario;
  }
}
