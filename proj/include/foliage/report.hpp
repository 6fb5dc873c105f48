#pragma once

// Plain-text reports. Every verdict line names the operation that produced
// it and the criterion it applied.

#include <foliage/catalog.hpp>
#include <foliage/graph.hpp>
#include <foliage/leaves.hpp>
#include <foliage/model.hpp>
#include <foliage/scenario.hpp>
#include <foliage/surgery.hpp>

#include <sstream>
#include <string>

namespace foliage {

namespace detail {

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline std::string join_refs(const std::vector<ComponentRef>& refs) {
  if (refs.empty()) return "(empty)";
  std::string s;
  for (const auto& r : refs) s += (s.empty() ? "" : " ") + to_string(r);
  return s;
}

}  // namespace detail

inline std::string report_header(const FoliationModel& m) {
  std::ostringstream os;
  os << "target: " << m.name << " on " << descriptor(m) << "\n";
  for (const auto& p : m.provenance) os << "provenance: " << p << "\n";
  return os.str();
}

inline std::string report_basicness(const FoliationModel& m) {
  std::ostringstream os;
  os << "basicness:\n";
  for (const auto& p : m.pieces) {
    os << "  " << p.label << " on " << p.orbifold.name << ": check_basic invariant=" << detail::yes_no(p.basic.honest);
    if (p.basic.overridden && !p.basic.honest)
      os << ", accepted by override (form is not invariant under every group element; treated as basic)";
    os << "\n";
  }
  return os.str();
}

inline std::string report_zeros(const FoliationModel& m) {
  std::ostringstream os;
  auto zs = model_zeros(m);
  os << "zeros: " << zs.size() << "\n";
  for (const auto& z : zs)
    os << "  zero " << z.id << ": index " << z.index << ", isotropy order " << z.isotropy_order << ", level "
       << render(z.level) << ", " << z.host << "\n";
  return os.str();
}

inline std::string report_periods(const FoliationModel& m) {
  std::ostringstream os;
  os << "periods:\n";
  auto ps = model_periods(m);
  for (const auto& p : ps)
    os << "  " << p.generator << " = " << render(p.value) << (p.element_preserves_form ? "" : " (element reverses the form)")
       << "\n";
  os << "rank: q_rank of the period values = " << q_rank(period_values(ps)) << "\n";
  return os.str();
}

inline std::string report_leaves(const FoliationModel& m) {
  std::ostringstream os;
  os << "leaves: " << m.catalog.size() << " classes\n";
  for (const auto& leaf : m.catalog) {
    os << "  " << leaf.id << " " << to_string(leaf.kind) << " [" << leaf.locus << "]";
    if (is_singular(leaf.kind)) {
      os << " components:";
      for (const auto& c : leaf.components)
        os << " " << c.id << "=" << (c.compact ? "compact" : "noncompact") << "/" << to_string(c.placement)
           << (c.from_tube ? "/tube" : "");
    }
    os << "\n";
  }
  auto mix = leaf_mix(m);
  os << "leaf mix: " << mix.compact_regular << " compact families, " << mix.noncompact_regular
     << " noncompact classes, " << mix.compact_singular_components << " compact singular components\n";
  return os.str();
}

inline std::string report_decomposition(const FoliationModel& m) {
  std::ostringstream os;
  const auto& d = m.decomposition;
  os << "decomposition (X = X_c u X_inf, common boundary of compact singular components):\n";
  os << "  X_c: " << detail::join_refs(d.xc) << "\n";
  for (const auto& p : d.xinf) {
    os << "  X_inf component " << p.id << ": " << detail::join_refs(p.members) << "; restricted rank "
       << p.restricted_rank;
    if (p.flagged) os << " (flagged: no generator loop survives)";
    os << "\n";
  }
  if (d.xinf.empty()) os << "  X_inf: (empty)\n";
  os << "  boundary: " << detail::join_refs(d.boundary) << "\n";
  return os.str();
}

inline std::string report_graph(const FoliationGraph& g, const std::string& label = "graph") {
  std::ostringstream os;
  std::size_t special = 0, zero = 0, marker = 0;
  for (const auto& v : g.vertices) {
    special += v.kind == VertexKind::Special;
    zero += v.kind == VertexKind::Zero;
    marker += v.kind == VertexKind::Marker;
  }
  os << label << ": " << g.vertices.size() << " vertices (" << zero << " zero, " << special << " special, " << marker
     << " marker), " << g.edges.size() << " edges";
  if (is_weakly_connected(g)) os << ", free rank " << free_rank(g);
  else os << ", disconnected";
  os << "\n";
  for (const auto& e : g.edges)
    os << "  edge " << e.id << ": v" << e.src << " -> v" << e.dst << " weight " << render(e.weight) << " (" << e.family
       << ")\n";
  return os.str();
}

inline std::string report_calabi(const FoliationGraph& g) {
  if (!is_weakly_connected(g))
    return "calabi: is_calabi not applicable, the graph is disconnected\n";
  return "calabi: is_calabi = " + detail::yes_no(is_calabi(g)) +
         " [criterion: a positive walk joins every ordered pair of vertices; special vertices are freely traversable]\n";
}

inline std::string report_transitivity(const TransitivityReport& r) {
  std::ostringstream os;
  if (r.genericized) {
    os << "transitivity: form is not generic; make_generic applied before the graph test\n";
    os << report_graph(r.raw_graph, "raw graph");
    os << report_graph(r.graph, "generic graph");
  }
  os << "transitivity: " << r.criterion << " -> " << (r.transitive ? "transitive" : "nontransitive") << "\n";
  if (r.note) os << "transitivity note: " << *r.note << "\n";
  return os.str();
}

inline std::string report_harmonicity(const FoliationModel& m) {
  auto h = harmonicity_verdict(m);
  return std::string("harmonicity: harmonicity_verdict = ") + to_string(h) +
         " [criterion: intrinsically harmonic iff transitive; no metric is constructed]\n";
}

inline std::string report_witness(const FoliationModel& m) {
  std::ostringstream os;
  auto w = factorization_witness(m);
  if (!w) {
    os << "witness: factorization_witness absent [criterion: the catalog has a noncompact leaf]\n";
    return os.str();
  }
  bool ok = true;
  for (const auto& c : w->checks) ok = ok && c.equal();
  os << "witness: factorization_witness present [criterion: every leaf is compact]; periods factor through a free "
        "group of rank "
     << free_rank(w->graph) << "; checks " << (ok ? "all equal" : "MISMATCH") << "\n";
  for (const auto& c : w->checks)
    os << "  " << c.generator << ": period " << render(c.period) << ", walk weight " << render(c.walk_sum) << "\n";
  for (const auto& s : w->skipped) os << "  " << s << ": skipped (element reverses the form)\n";
  return os.str();
}

inline std::string full_report(const Scenario& sc, const FoliationModel& m) {
  std::ostringstream os;
  os << "scenario:\n";
  std::istringstream echo(serialize(sc));
  for (std::string line; std::getline(echo, line);) os << "  | " << line << "\n";
  os << report_header(m) << report_basicness(m) << report_zeros(m) << report_periods(m) << report_leaves(m)
     << report_decomposition(m) << report_graph(m.graph) << report_calabi(m.graph)
     << report_transitivity(transitivity(m)) << report_harmonicity(m) << report_witness(m);
  return os.str();
}

}  // namespace foliage
