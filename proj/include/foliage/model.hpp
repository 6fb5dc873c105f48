#pragma once

// Combinatorial foliation model: the leaf-space skeleton (circle families of
// compact leaves, X_inf components, singular leaves) from which the catalog,
// the X_c/X_inf decomposition and the foliation graph are derived.

#include <foliage/error.hpp>
#include <foliage/forms.hpp>
#include <foliage/graph.hpp>
#include <foliage/leaves.hpp>
#include <foliage/orbifold.hpp>
#include <foliage/scalar.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace foliage {

/// One input surface of a (possibly iterated) connected sum.
struct Piece {
  std::string label;
  OrbifoldPresentation orbifold;
  ClosedForm form;
  BasicVerdict basic;
  std::vector<Period> periods;  // generator ids carry the piece label: "label:a"
  std::size_t rank = 0;
  bool compact = false;         // every leaf of the piece is compact
  std::optional<SymScalar> circle_period;
};

enum class NodeKind { Marker, Junction, Special };

struct Node {
  std::size_t id = 0;
  NodeKind kind = NodeKind::Marker;
  std::vector<std::size_t> zeros;
  std::vector<std::string> pieces;  // Special: pieces whose loops survive into the X_inf component
};

/// Maximal family of compact regular leaves: a level interval from the
/// node at its lower end to the node at its upper end.
struct Family {
  std::size_t id = 0;
  std::size_t src = 0;
  std::size_t dst = 0;
  SymScalar weight;
  SymScalar offset;  // level at the lower end
  std::vector<std::string> pieces;
  bool tube = false;
};

struct SingularRecord {
  std::size_t id = 0;
  std::vector<std::size_t> zeros;
  std::vector<LeafComponent> components;
};

struct ComponentRef {
  std::string leaf;
  std::size_t component = 0;
  bool operator==(const ComponentRef&) const = default;
};

inline std::string to_string(const ComponentRef& r) { return r.leaf + "#" + std::to_string(r.component); }

struct InfPart {
  std::size_t id = 0;
  std::vector<ComponentRef> members;
  std::vector<std::string> pieces;
  std::size_t restricted_rank = 0;
  bool flagged = false;  // no generator loop survives into the component
};

struct Decomposition {
  std::vector<ComponentRef> xc;
  std::vector<InfPart> xinf;
  std::vector<ComponentRef> boundary;
};

struct SurgerySpec;

struct FoliationModel {
  std::string name;
  TablePtr table;
  std::vector<Piece> pieces;
  ClosedForm form;  // the piece form, or the patch records of a sum
  std::vector<Node> nodes;
  std::vector<Family> families;
  std::vector<SingularRecord> singular;
  std::vector<std::string> provenance;
  std::shared_ptr<const SurgerySpec> origin;

  std::vector<LeafClass> catalog;
  Decomposition decomposition;
  FoliationGraph graph;

  bool is_sum() const { return origin != nullptr; }

  const Node* node(std::size_t id) const {
    for (const auto& n : nodes)
      if (n.id == id) return &n;
    return nullptr;
  }
  const Family* family(std::size_t id) const {
    for (const auto& f : families)
      if (f.id == id) return &f;
    return nullptr;
  }
  const Piece* piece(const std::string& label) const {
    for (const auto& p : pieces)
      if (p.label == label) return &p;
    return nullptr;
  }
};

using ModelPtr = std::shared_ptr<const FoliationModel>;

inline std::vector<Period> model_periods(const FoliationModel& m) {
  std::vector<Period> out;
  for (const auto& p : m.pieces) out.insert(out.end(), p.periods.begin(), p.periods.end());
  return out;
}

inline std::vector<Zero> model_zeros(const FoliationModel& m) { return zeros(m.form); }

inline std::string descriptor(const FoliationModel& m) {
  if (m.pieces.size() == 1) return m.pieces[0].orbifold.name;
  std::string s;
  for (const auto& p : m.pieces) s += (s.empty() ? "" : " # ") + p.orbifold.name + "[" + p.label + "]";
  return s;
}

inline bool all_leaves_compact(const FoliationModel& m) {
  return std::all_of(m.catalog.begin(), m.catalog.end(), [](const LeafClass& c) {
    return c.kind == LeafKind::CompactRegular || c.kind == LeafKind::CompactSingular;
  });
}

namespace detail {

inline std::string family_id(std::size_t id) { return "f" + std::to_string(id); }
inline std::string inf_id(std::size_t id) { return "x" + std::to_string(id); }
inline std::string singular_id(std::size_t id) { return "s" + std::to_string(id); }

inline std::vector<LeafClass> build_catalog(const FoliationModel& m) {
  std::vector<LeafClass> out;
  std::optional<TorusPoint> rep;
  if (!m.is_sum() && !m.pieces.empty()) rep = orbit_representative(m.pieces[0].orbifold.basepoint, m.pieces[0].orbifold);
  auto fams = m.families;
  std::sort(fams.begin(), fams.end(), [](const Family& a, const Family& b) { return a.id < b.id; });
  for (const auto& f : fams) {
    LeafClass c;
    c.id = family_id(f.id);
    c.kind = LeafKind::CompactRegular;
    c.components.push_back({0, true, Placement::Xc, 0});
    c.representative = rep;
    c.locus = "levels " + render(f.offset) + " .. " + render(f.offset + f.weight) + (f.tube ? " (tube)" : "");
    out.push_back(std::move(c));
  }
  for (const auto& n : m.nodes) {
    if (n.kind != NodeKind::Special) continue;
    LeafClass c;
    c.id = inf_id(n.id);
    c.kind = LeafKind::NoncompactRegular;
    c.components.push_back({0, false, Placement::XInf, n.id});
    c.representative = rep;
    c.locus = "X_inf component " + std::to_string(n.id);
    out.push_back(std::move(c));
  }
  for (const auto& s : m.singular) {
    LeafClass c;
    c.id = singular_id(s.id);
    c.zeros = s.zeros;
    c.components = s.components;
    bool compact = std::all_of(s.components.begin(), s.components.end(), [](const LeafComponent& x) { return x.compact; });
    c.kind = compact ? LeafKind::CompactSingular : LeafKind::NoncompactSingular;
    for (auto& x : c.components) {
      if (compact) x.placement = Placement::Xc;
      else x.placement = x.compact ? Placement::Boundary : Placement::XInf;
    }
    c.locus = "singular leaf through zeros";
    for (auto z : s.zeros) c.locus += " " + std::to_string(z);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

/// X_c, the components of X_inf with the rank of the periods restricted to
/// the generator loops that survive into each, and the common boundary.
inline Decomposition decompose(const FoliationModel& m) {
  if (m.catalog.empty()) throw PreconditionError("leaf catalog incomplete");
  Decomposition d;
  std::map<std::size_t, InfPart> parts;
  for (const auto& n : m.nodes)
    if (n.kind == NodeKind::Special) {
      InfPart p;
      p.id = n.id;
      p.pieces = n.pieces;
      std::vector<SymScalar> vals;
      for (const auto& label : n.pieces) {
        const Piece* piece = m.piece(label);
        if (!piece) throw PreconditionError("X_inf component " + std::to_string(n.id) + " names unknown piece " + label);
        for (const auto& per : piece->periods) vals.push_back(per.value);
      }
      p.flagged = vals.empty();
      p.restricted_rank = q_rank(vals);
      parts[n.id] = std::move(p);
    }
  for (const auto& leaf : m.catalog)
    for (const auto& c : leaf.components) {
      ComponentRef ref{leaf.id, c.id};
      switch (c.placement) {
        case Placement::Xc: d.xc.push_back(ref); break;
        case Placement::Boundary: d.boundary.push_back(ref); break;
        case Placement::XInf: {
          auto it = parts.find(c.inf_component);
          if (it == parts.end())
            throw PreconditionError("leaf " + leaf.id + " points at a missing X_inf component");
          it->second.members.push_back(ref);
          break;
        }
      }
    }
  for (auto& [id, p] : parts) d.xinf.push_back(std::move(p));
  return d;
}

/// Nodes become vertices, families become edges. A junction with a single
/// family in and a single family out does not change leaf connectivity and
/// is spliced away.
inline FoliationGraph build_graph(const FoliationModel& m) {
  if (m.catalog.empty()) throw PreconditionError("leaf catalog incomplete");
  FoliationGraph g;
  for (const auto& n : m.nodes) {
    Vertex v;
    v.id = n.id;
    v.zeros = n.zeros;
    switch (n.kind) {
      case NodeKind::Marker: v.kind = VertexKind::Marker; break;
      case NodeKind::Junction: v.kind = VertexKind::Zero; break;
      case NodeKind::Special:
        v.kind = VertexKind::Special;
        v.component = n.id;
        break;
    }
    g.vertices.push_back(std::move(v));
  }
  for (const auto& f : m.families) g.edges.push_back({f.id, f.src, f.dst, f.weight, detail::family_id(f.id)});

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < g.vertices.size() && !changed; ++i) {
      const Vertex& v = g.vertices[i];
      if (v.kind != VertexKind::Zero) continue;
      std::vector<std::size_t> in, out;
      bool loop = false;
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        if (e.src == v.id && e.dst == v.id) loop = true;
        else if (e.dst == v.id) in.push_back(k);
        else if (e.src == v.id) out.push_back(k);
      }
      if (loop || in.size() != 1 || out.size() != 1) continue;
      Edge& a = g.edges[in[0]];
      const Edge& b = g.edges[out[0]];
      a.dst = b.dst;
      a.weight += b.weight;
      a.family += "+" + b.family;
      g.edges.erase(g.edges.begin() + static_cast<std::ptrdiff_t>(out[0]));
      g.vertices.erase(g.vertices.begin() + static_cast<std::ptrdiff_t>(i));
      changed = true;
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  validate(g);
  return g;
}

inline void finalize(FoliationModel& m) {
  std::sort(m.nodes.begin(), m.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(m.families.begin(), m.families.end(), [](const Family& a, const Family& b) { return a.id < b.id; });
  m.catalog = detail::build_catalog(m);
  m.decomposition = decompose(m);
  m.graph = build_graph(m);
}

/// Single-surface model. Rank at most one: every leaf is a circle and the
/// leaf space is one circle of period P. Otherwise every leaf is dense and
/// the whole surface is one X_inf component.
inline FoliationModel base_model(std::string label, const OrbifoldPresentation& O, const ClosedForm& w) {
  if (w.is_patched()) throw PreconditionError("base models take unpatched forms");
  if (w.linear_is_zero()) throw PreconditionError("form vanishes identically, so it is not of Morse type");
  validate_bumps(w, O);
  zeros(w);
  Piece p;
  p.label = label;
  p.orbifold = O;
  p.form = w;
  p.basic = basic_verdict(w, O);
  if (!p.basic.accepted()) throw PreconditionError("form is not basic for the action of " + O.name + " and no override is set");
  p.periods = periods(w, O);
  for (auto& per : p.periods) per.generator = label + ":" + per.generator;
  p.rank = q_rank(period_values(p.periods));
  p.compact = p.rank <= 1;
  p.circle_period = circle_period(p.periods);
  if (p.compact && !p.circle_period)
    throw PreconditionError("rank-one form on " + O.name + " has no positive period on form-preserving loops");

  FoliationModel m;
  m.name = label;
  m.table = w.table;
  m.form = w;
  if (p.compact) {
    m.nodes.push_back({0, NodeKind::Marker, {}, {}});
    m.families.push_back({0, 0, 0, *p.circle_period, SymScalar(w.table), {label}, false});
  } else {
    m.nodes.push_back({0, NodeKind::Special, {}, {label}});
  }
  m.pieces.push_back(std::move(p));
  finalize(m);
  return m;
}

}  // namespace foliage
