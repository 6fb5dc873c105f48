#pragma once

// Weighted directed foliation graph: Calabi test, brute-force walk oracle,
// and DOT export.

#include <foliage/error.hpp>
#include <foliage/scalar.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace foliage {

enum class VertexKind { Zero, Terminal, Special, Marker };

inline const char* to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Zero: return "Zero";
    case VertexKind::Terminal: return "Terminal";
    case VertexKind::Special: return "Special";
    case VertexKind::Marker: return "Marker";
  }
  return "?";
}

struct Vertex {
  std::size_t id = 0;
  VertexKind kind = VertexKind::Marker;
  std::vector<std::size_t> zeros;
  std::optional<std::size_t> component;  // X_inf component of a Special vertex
};

struct Edge {
  std::size_t id = 0;
  std::size_t src = 0;
  std::size_t dst = 0;
  SymScalar weight;
  std::string family;
};

struct FoliationGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  const Vertex* vertex(std::size_t id) const {
    for (const auto& v : vertices)
      if (v.id == id) return &v;
    return nullptr;
  }
  const Edge* edge(std::size_t id) const {
    for (const auto& e : edges)
      if (e.id == id) return &e;
    return nullptr;
  }
};

/// Checks ids, endpoints, strict positivity of weights and univalence of
/// terminal vertices.
inline void validate(const FoliationGraph& g) {
  std::map<std::size_t, int> degree;
  for (const auto& v : g.vertices) {
    if (degree.count(v.id)) throw PreconditionError("duplicate vertex id " + std::to_string(v.id));
    degree[v.id] = 0;
  }
  std::map<std::size_t, bool> seen;
  for (const auto& e : g.edges) {
    if (seen[e.id]) throw PreconditionError("duplicate edge id " + std::to_string(e.id));
    seen[e.id] = true;
    if (!degree.count(e.src) || !degree.count(e.dst))
      throw PreconditionError("edge " + std::to_string(e.id) + " has an unknown endpoint");
    if (sign(e.weight) != Sign::pos)
      throw PreconditionError("edge " + std::to_string(e.id) + " has non-positive weight " + render(e.weight));
    ++degree[e.src];
    ++degree[e.dst];
  }
  for (const auto& v : g.vertices)
    if (v.kind == VertexKind::Terminal && degree[v.id] != 1)
      throw PreconditionError("terminal vertex " + std::to_string(v.id) + " is not univalent");
}

inline SymScalar edge_weight(const FoliationGraph& g, std::size_t edge_id) {
  const Edge* e = g.edge(edge_id);
  if (!e) throw PreconditionError("no edge with id " + std::to_string(edge_id));
  return e->weight;
}

namespace detail {

struct Indexed {
  std::map<std::size_t, std::size_t> pos;
  std::vector<std::vector<std::size_t>> out, in;
};

inline Indexed index_graph(const FoliationGraph& g) {
  Indexed ix;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) ix.pos[g.vertices[i].id] = i;
  ix.out.assign(g.vertices.size(), {});
  ix.in.assign(g.vertices.size(), {});
  for (const auto& e : g.edges) {
    ix.out[ix.pos.at(e.src)].push_back(ix.pos.at(e.dst));
    ix.in[ix.pos.at(e.dst)].push_back(ix.pos.at(e.src));
  }
  return ix;
}

inline std::vector<char> reach_from(std::size_t s, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (auto w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

}  // namespace detail

inline bool is_weakly_connected(const FoliationGraph& g) {
  if (g.vertices.empty()) return false;
  auto ix = detail::index_graph(g);
  std::vector<std::vector<std::size_t>> und(g.vertices.size());
  for (std::size_t v = 0; v < und.size(); ++v) {
    und[v] = ix.out[v];
    und[v].insert(und[v].end(), ix.in[v].begin(), ix.in[v].end());
  }
  auto seen = detail::reach_from(0, und);
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
}

/// Every ordered pair of vertices joined by a positive walk: strong
/// connectivity, plus a closed walk through a lone vertex. Positivity is
/// free inside an X_inf component, so Special vertices count as lying on a
/// closed walk.
inline bool is_calabi(const FoliationGraph& g) {
  if (!is_weakly_connected(g)) throw PreconditionError("Calabi test needs a connected graph");
  auto ix = detail::index_graph(g);
  auto fwd = detail::reach_from(0, ix.out);
  auto bwd = detail::reach_from(0, ix.in);
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (!fwd[v] || !bwd[v]) return false;
  if (g.vertices.size() == 1) {
    if (g.vertices[0].kind == VertexKind::Special) return true;
    return !g.edges.empty();
  }
  return true;
}

struct CalabiConditions {
  bool cond1 = false;  // positive walk between every ordered pair of vertices
  bool cond2 = false;  // positive closed walk through every point of the graph
};

/// Exhaustive walk search on small graphs. cond2 asks for a closed walk
/// through every point of the graph: every vertex and every edge.
inline CalabiConditions calabi_equiv_bruteforce(const FoliationGraph& g) {
  const std::size_t n = g.vertices.size();
  if (n > 12) throw PreconditionError("brute-force Calabi check is limited to 12 vertices");
  if (n == 0) throw PreconditionError("empty graph");
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[g.vertices[i].id] = i;
  // walk[k][i][j]: a walk with at least one step from i to j, grown one
  // step at a time up to length n.
  std::vector<std::vector<char>> step(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges) step[pos.at(e.src)][pos.at(e.dst)] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (g.vertices[i].kind == VertexKind::Special) step[i][i] = 1;
  auto walk = step;
  for (std::size_t len = 2; len <= n; ++len) {
    auto next = walk;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (walk[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (step[k][j]) next[i][j] = 1;
    walk = std::move(next);
  }
  CalabiConditions c;
  c.cond1 = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!walk[i][j]) c.cond1 = false;
  c.cond2 = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!walk[i][i]) c.cond2 = false;
  for (const auto& e : g.edges) {
    std::size_t s = pos.at(e.src), d = pos.at(e.dst);
    if (s != d && !walk[d][s]) c.cond2 = false;
  }
  return c;
}

/// DOT text with vertices and edges sorted by id.
inline std::string to_dot(const FoliationGraph& g) {
  auto vs = g.vertices;
  std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  auto es = g.edges;
  std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  std::ostringstream os;
  os << "digraph foliation {\n";
  for (const auto& v : vs) os << "v" << v.id << " [kind=\"" << to_string(v.kind) << "\"];\n";
  for (const auto& e : es) os << "v" << e.src << " -> v" << e.dst << " [label=\"" << render(e.weight) << "\"];\n";
  os << "}\n";
  return os.str();
}

/// Cycle rank E - V + 1 of a connected graph: the rank of its free
/// fundamental group.
inline std::size_t free_rank(const FoliationGraph& g) {
  return g.edges.size() + 1 - g.vertices.size();
}

struct WitnessCheck {
  std::string generator;
  SymScalar period;
  SymScalar walk_sum;
  bool equal() const { return period == walk_sum; }
};

struct FactorizationWitness {
  FoliationGraph graph;
  std::map<std::size_t, SymScalar> cocycle;
  std::vector<WitnessCheck> checks;
  std::vector<std::string> skipped;  // generators whose element reverses the form
};

}  // namespace foliage
