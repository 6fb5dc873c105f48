#pragma once

// Connected sums along a tube (kinds A, B, C by the order of the two new
// saddle levels), perturbation to a generic form, transitivity through the
// foliation graph, the harmonicity verdict and the free-group witness.

#include <foliage/error.hpp>
#include <foliage/graph.hpp>
#include <foliage/model.hpp>
#include <foliage/scalar.hpp>

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace foliage {

/// Disk placement: region is "circle", "special", "e<N>" (family id) or
/// "v<N>" (Special node id); the window is the level range of the disk in
/// the model's own chart.
struct DiskPlacement {
  std::string region;
  SymScalar lo;
  SymScalar hi;
  std::optional<TorusPoint> center;
};

struct SurgerySpec {
  std::string name;
  char kind = 'A';
  ModelPtr left;
  ModelPtr right;
  DiskPlacement left_disk;
  DiskPlacement right_disk;
  SymScalar right_shift;  // right chart + shift = left chart
  SymScalar x;            // tube levels, left chart
  SymScalar y;
  std::array<Rational, 2> amplitudes{0, 0};
};

namespace detail {

struct Side {
  bool special = false;
  std::size_t id = 0;  // family or node id, combined numbering
  bool circle = false;
  SymScalar period;    // circle period
  SymScalar lo, hi;    // family level range, combined chart
  std::vector<std::string> pieces;
};

inline std::optional<std::size_t> parse_region_id(const std::string& s, char prefix) {
  if (s.size() < 2 || s[0] != prefix || !all_digits(std::string_view(s).substr(1))) return std::nullopt;
  return std::stoul(s.substr(1));
}

inline Side resolve_side(const FoliationModel& m, const DiskPlacement& d, const char* which) {
  Side s;
  const std::string where = std::string(which) + " disk region \"" + d.region + "\"";
  const Family* fam = nullptr;
  const Node* special = nullptr;
  if (d.region == "circle") {
    for (const auto& f : m.families) {
      const Node* n = m.node(f.src);
      if (f.src == f.dst && n && n->kind == NodeKind::Marker) {
        if (fam) throw PreconditionError(where + " is ambiguous");
        fam = &f;
      }
    }
  } else if (d.region == "special") {
    for (const auto& n : m.nodes)
      if (n.kind == NodeKind::Special) {
        if (special) throw PreconditionError(where + " is ambiguous");
        special = &n;
      }
  } else if (auto e = parse_region_id(d.region, 'e')) {
    fam = m.family(*e);
  } else if (auto v = parse_region_id(d.region, 'v')) {
    special = m.node(*v);
    if (special && special->kind != NodeKind::Special)
      throw PreconditionError(where + " is not a Special vertex");
  }
  if (!fam && !special) throw PreconditionError(where + " not found");
  if (!less(d.lo, d.hi)) throw PreconditionError(where + " has an empty level window");
  if (special) {
    s.special = true;
    s.id = special->id;
    s.pieces = special->pieces;
  } else {
    s.id = fam->id;
    s.circle = fam->src == fam->dst && m.node(fam->src)->kind == NodeKind::Marker;
    s.period = fam->weight;
    s.lo = fam->offset;
    s.hi = fam->offset + fam->weight;
    s.pieces = fam->pieces;
    if (!s.circle && !(less(s.lo, d.lo) && less(d.hi, s.hi)))
      throw PreconditionError(where + ": window must lie strictly inside the family levels " + render(s.lo) + " .. " +
                              render(s.hi));
  }
  if (d.center) {
    for (const auto& label : s.pieces) {
      const Piece* p = m.piece(label);
      if (p && isotropy_order(*d.center, p->orbifold) != 1)
        throw PreconditionError(where + ": disk center " + to_string(*d.center) + " is an orbifold-singular point");
    }
  }
  return s;
}

class Builder {
 public:
  FoliationModel m;
  std::size_t next_node = 0, next_family = 0, next_singular = 0;

  std::size_t add_node(NodeKind k, std::vector<std::size_t> zeros) {
    std::size_t id = next_node++;
    m.nodes.push_back({id, k, std::move(zeros), {}});
    return id;
  }
  Node& node(std::size_t id) {
    for (auto& n : m.nodes)
      if (n.id == id) return n;
    throw PreconditionError("internal: missing node " + std::to_string(id));
  }
  Family take_family(std::size_t id) {
    auto it = std::find_if(m.families.begin(), m.families.end(), [&](const Family& f) { return f.id == id; });
    if (it == m.families.end()) throw PreconditionError("internal: missing family " + std::to_string(id));
    Family f = *it;
    m.families.erase(it);
    return f;
  }
  void add_family(std::size_t src, std::size_t dst, const SymScalar& w, const SymScalar& offset,
                  std::vector<std::string> pieces, bool tube = false) {
    if (sign(w) != Sign::pos)
      throw PreconditionError("surgery would create a family of non-positive length " + render(w));
    m.families.push_back({next_family++, src, dst, w, offset, std::move(pieces), tube});
  }
  void add_singular(std::vector<std::size_t> zeros, std::vector<LeafComponent> comps) {
    for (std::size_t i = 0; i < comps.size(); ++i) comps[i].id = i;
    m.singular.push_back({next_singular++, std::move(zeros), std::move(comps)});
  }
  void drop_orphan_markers() {
    std::erase_if(m.nodes, [&](const Node& n) {
      if (n.kind != NodeKind::Marker) return false;
      return std::none_of(m.families.begin(), m.families.end(),
                          [&](const Family& f) { return f.src == n.id || f.dst == n.id; });
    });
  }

  // Cuts a family at one level into the given node.
  void split_at(const Side& s, const SymScalar& level, std::size_t at) {
    Family f = take_family(s.id);
    if (s.circle) {
      add_family(at, at, f.weight, level, f.pieces);
    } else {
      add_family(f.src, at, level - f.offset, f.offset, f.pieces);
      add_family(at, f.dst, f.offset + f.weight - level, level, f.pieces);
    }
  }

  // Removes the levels (lo, hi) of a family: the part below ends at `below`,
  // the part above starts at `above`.
  void cut_window(const Side& s, const SymScalar& lo, const SymScalar& hi, std::size_t below, std::size_t above) {
    Family f = take_family(s.id);
    if (s.circle) {
      add_family(above, below, f.weight - (hi - lo), hi, f.pieces);
    } else {
      add_family(f.src, below, lo - f.offset, f.offset, f.pieces);
      add_family(above, f.dst, f.offset + f.weight - hi, hi, f.pieces);
    }
  }
};

inline LeafComponent compact_comp() { return {0, true, Placement::Xc, 0, false}; }
inline LeafComponent noncompact_comp(std::size_t special) { return {0, false, Placement::XInf, special, false}; }

inline std::vector<std::string> merged_pieces(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (const auto& x : b)
    if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
  return a;
}

inline std::string unique_label(const std::string& want, const std::set<std::string>& taken) {
  std::string l = want;
  for (int k = 2; taken.count(l); ++k) l = want + "_" + std::to_string(k);
  return l;
}

}  // namespace detail

/// Glues two models along a tube. Ids of the left model are kept, ids of
/// the right model are shifted past them, new ids come last. The two new
/// zeros are numbered after all inherited zeros, left tube end first.
inline FoliationModel connected_sum(const SurgerySpec& spec) {
  using detail::Side;
  if (!spec.left || !spec.right) throw PreconditionError("connected sum needs two models");
  if (spec.kind != 'A' && spec.kind != 'B' && spec.kind != 'C')
    throw PreconditionError(std::string("unknown connected-sum kind ") + spec.kind);
  const FoliationModel& L = *spec.left;
  const FoliationModel& R = *spec.right;
  if (L.table != R.table) throw PreconditionError("connected sum of models over different symbol tables");
  const TablePtr t = L.table;
  const SymScalar shift = spec.right_shift;
  const SymScalar X = spec.x + SymScalar(t, spec.amplitudes[0]);
  const SymScalar Y = spec.y + SymScalar(t, spec.amplitudes[1]);

  Side ls = detail::resolve_side(L, spec.left_disk, "left");
  Side rs = detail::resolve_side(R, spec.right_disk, "right");

  // Existing singular levels in the left chart.
  std::vector<SymScalar> levels;
  for (const auto& z : model_zeros(L)) levels.push_back(z.level);
  for (const auto& z : model_zeros(R)) levels.push_back(z.level + shift);
  for (const auto& lv : levels)
    if (lv == spec.x || lv == spec.y)
      throw PreconditionError("tube level " + render(lv) + " coincides with an existing singular level");

  const SymScalar lo_l = spec.left_disk.lo, hi_l = spec.left_disk.hi;
  const SymScalar lo_r = spec.right_disk.lo + shift, hi_r = spec.right_disk.hi + shift;
  const SymScalar jlo = less(lo_l, lo_r) ? lo_r : lo_l;
  const SymScalar jhi = less(hi_l, hi_r) ? hi_l : hi_r;
  const bool overlap = less(jlo, jhi);
  auto inside = [](const SymScalar& v, const SymScalar& lo, const SymScalar& hi) { return less(lo, v) && less(v, hi); };

  switch (spec.kind) {
    case 'A':
      if (!overlap) throw PreconditionError("kind A needs overlapping level windows");
      for (const auto& [a, b] : {std::pair{spec.x, spec.y}, std::pair{X, Y}})
        if (!(inside(a, jlo, jhi) && inside(b, jlo, jhi) && less(a, b)))
          throw PreconditionError("kind A needs window-overlap levels with first < second, got " + render(a) + ", " +
                                  render(b));
      break;
    case 'B':
      if (overlap || jlo == jhi) throw PreconditionError("kind B needs disjoint level windows");
      for (const auto& [a, b] : {std::pair{spec.x, spec.y}, std::pair{X, Y}})
        if (!(inside(a, lo_l, hi_l) && inside(b, lo_r, hi_r) && less(b, a)))
          throw PreconditionError("kind B needs first level in the left window, second in the right, first > second");
      break;
    case 'C':
      if (!overlap) throw PreconditionError("kind C needs overlapping level windows");
      if (!(spec.x == spec.y)) throw PreconditionError("kind C needs equal tube levels");
      if (!inside(X, jlo, jhi) || !inside(Y, jlo, jhi))
        throw PreconditionError("kind C tube level must lie inside the window overlap");
      break;
  }

  // Combined skeleton.
  detail::Builder b;
  std::size_t node_off = 0, fam_off = 0, sing_off = 0, patch_off = 0;
  for (const auto& n : L.nodes) node_off = std::max(node_off, n.id + 1);
  for (const auto& f : L.families) fam_off = std::max(fam_off, f.id + 1);
  for (const auto& s : L.singular) sing_off = std::max(sing_off, s.id + 1);
  for (const auto& p : L.form.patches) patch_off = std::max(patch_off, p.id + 1);
  const std::size_t zero_off = model_zeros(L).size();
  const std::size_t right_zeros = model_zeros(R).size();

  std::set<std::string> taken;
  for (const auto& p : L.pieces) taken.insert(p.label);
  std::map<std::string, std::string> relabel;
  for (const auto& p : R.pieces) {
    relabel[p.label] = detail::unique_label(p.label, taken);
    taken.insert(relabel[p.label]);
  }
  auto map_pieces = [&](std::vector<std::string> v) {
    for (auto& s : v) s = relabel.at(s);
    return v;
  };

  FoliationModel& M = b.m;
  M.name = spec.name;
  M.table = t;
  M.pieces = L.pieces;
  for (auto p : R.pieces) {
    std::string old = p.label;
    p.label = relabel.at(old);
    for (auto& per : p.periods) per.generator = p.label + per.generator.substr(old.size());
    M.pieces.push_back(std::move(p));
  }
  M.form = ClosedForm::linear(t, SymScalar(t), SymScalar(t));
  M.form.patches = L.form.patches;
  for (auto p : R.form.patches) {
    p.id += patch_off;
    for (auto& z : p.zeros) z += zero_off;
    for (auto& lv : p.levels) lv += shift;
    M.form.patches.push_back(p);
  }
  M.nodes = L.nodes;
  for (auto n : R.nodes) {
    n.id += node_off;
    for (auto& z : n.zeros) z += zero_off;
    n.pieces = map_pieces(n.pieces);
    M.nodes.push_back(std::move(n));
  }
  M.families = L.families;
  for (auto f : R.families) {
    f.id += fam_off;
    f.src += node_off;
    f.dst += node_off;
    f.offset += shift;
    f.pieces = map_pieces(f.pieces);
    M.families.push_back(std::move(f));
  }
  M.singular = L.singular;
  for (auto s : R.singular) {
    s.id += sing_off;
    for (auto& z : s.zeros) z += zero_off;
    for (auto& c : s.components) c.inf_component += node_off;
    M.singular.push_back(std::move(s));
  }
  M.provenance = L.provenance;
  M.provenance.insert(M.provenance.end(), R.provenance.begin(), R.provenance.end());
  b.next_node = node_off;
  for (const auto& n : R.nodes) b.next_node = std::max(b.next_node, n.id + node_off + 1);
  b.next_family = fam_off;
  for (const auto& f : R.families) b.next_family = std::max(b.next_family, f.id + fam_off + 1);
  b.next_singular = sing_off;
  for (const auto& s : R.singular) b.next_singular = std::max(b.next_singular, s.id + sing_off + 1);

  if (rs.special) {
    rs.id += node_off;
  } else {
    rs.id += fam_off;
    rs.lo += shift;
    rs.hi += shift;
  }
  rs.pieces = map_pieces(rs.pieces);

  const std::size_t zx = zero_off + right_zeros, zy = zx + 1;
  SurgeryPatch patch;
  patch.id = patch_off;
  for (const auto& p : R.form.patches) patch.id = std::max(patch.id, p.id + patch_off + 1);
  patch.kind = spec.kind;
  patch.zeros = {zx, zy};
  patch.levels = {spec.x, spec.y};
  patch.amplitudes = spec.amplitudes;
  M.form.patches.push_back(patch);

  // Tube from the lower zero's side to the upper one (kind B, and kind C once
  // its levels are separated).
  auto tube = [&](const Side& upper, std::size_t z_up, const SymScalar& l_up, const Side& lower, std::size_t z_low,
                  const SymScalar& l_low) {
    auto end_node = [&](const Side& s, std::size_t z, const SymScalar& lv) {
      if (s.special) {
        b.node(s.id).zeros.push_back(z);
        return s.id;
      }
      std::size_t n = b.add_node(NodeKind::Junction, {z});
      b.split_at(s, lv, n);
      return n;
    };
    std::size_t nu = end_node(upper, z_up, l_up);
    std::size_t nl = end_node(lower, z_low, l_low);
    b.add_family(nl, nu, l_up - l_low, l_low, {}, true);
    auto leaf = [&](const Side& s, std::size_t z) {
      LeafComponent side = s.special ? detail::noncompact_comp(s.id) : detail::compact_comp();
      LeafComponent circle = detail::compact_comp();
      b.add_singular({z}, {side, circle});
    };
    leaf(upper, z_up);
    leaf(lower, z_low);
  };

  if (spec.kind == 'B' || (spec.kind == 'C' && !(X == Y))) {
    if (less(Y, X)) tube(ls, zx, X, rs, zy, Y);
    else tube(rs, zy, Y, ls, zx, X);
  } else if (spec.kind == 'C') {
    std::vector<LeafComponent> comps;
    std::optional<std::size_t> junction;
    std::optional<std::size_t> special;
    for (const Side* s : {&ls, &rs})
      if (s->special && !special) special = s->id;
    for (const Side* s : {&ls, &rs}) {
      if (s->special) {
        comps.push_back(detail::noncompact_comp(s->id));
        continue;
      }
      std::size_t at;
      if (special) {
        at = *special;
      } else {
        if (!junction) junction = b.add_node(NodeKind::Junction, {zx, zy});
        at = *junction;
      }
      b.split_at(*s, X, at);
      comps.push_back(detail::compact_comp());
    }
    if (ls.special && rs.special) {
      b.node(ls.id).zeros.push_back(zx);
      b.node(rs.id).zeros.push_back(zy);
    } else if (special) {
      b.node(*special).zeros.push_back(zx);
      b.node(*special).zeros.push_back(zy);
    }
    LeafComponent t_comp = detail::compact_comp();
    t_comp.from_tube = true;
    comps.push_back(t_comp);
    b.add_singular({zx, zy}, comps);
  } else {
    // Kind A. A circle side whose window covers at least two full turns is
    // swallowed whole; one full turn but less than two is not modelled.
    const SymScalar h = Y - X;
    auto type = [&](const Side& s) -> char {
      if (s.special) return 'S';
      if (!s.circle) return 'C';
      if (less(h, s.period)) return 'C';
      if (!less(h, s.period * Rational(2))) return 'W';
      throw PreconditionError("kind A with a tube span between one and two circle periods is not supported");
    };
    const char tl = type(ls), tr = type(rs);
    auto singular_pair = [&](LeafComponent a, LeafComponent c) {
      b.add_singular({zx}, {a, c});
      b.add_singular({zy}, {a, c});
    };
    if (tl == 'C' && tr == 'C') {
      std::size_t nx = b.add_node(NodeKind::Junction, {zx});
      std::size_t ny = b.add_node(NodeKind::Junction, {zy});
      b.cut_window(ls, X, Y, nx, ny);
      b.cut_window(rs, X, Y, nx, ny);
      b.add_family(nx, ny, h, X, detail::merged_pieces(ls.pieces, rs.pieces));
      singular_pair(detail::compact_comp(), detail::compact_comp());
    } else if (tl == 'W' && tr == 'W') {
      if (q_rank(std::vector<SymScalar>{ls.period, rs.period}) != 2)
        throw PreconditionError("kind A swallowing two circles with commensurable periods is not supported");
      b.take_family(ls.id);
      b.take_family(rs.id);
      std::size_t s = b.add_node(NodeKind::Special, {zx, zy});
      b.node(s).pieces = detail::merged_pieces(ls.pieces, rs.pieces);
      singular_pair(detail::noncompact_comp(s), detail::noncompact_comp(s));
    } else if (tl == 'S' || tr == 'S') {
      const Side& sp = tl == 'S' ? ls : rs;
      const Side& other = tl == 'S' ? rs : ls;
      const char to = tl == 'S' ? tr : tl;
      std::size_t s = sp.id;
      LeafComponent other_comp = detail::noncompact_comp(s);
      if (to == 'S') {
        Node absorbed = b.node(other.id);
        std::erase_if(M.nodes, [&](const Node& n) { return n.id == other.id; });
        Node& keep = b.node(s);
        keep.zeros.insert(keep.zeros.end(), absorbed.zeros.begin(), absorbed.zeros.end());
        keep.pieces = detail::merged_pieces(keep.pieces, absorbed.pieces);
        for (auto& f : M.families) {
          if (f.src == other.id) f.src = s;
          if (f.dst == other.id) f.dst = s;
        }
        for (auto& rec : M.singular)
          for (auto& c : rec.components)
            if (!c.compact && c.inf_component == other.id) c.inf_component = s;
      } else if (to == 'W') {
        b.take_family(other.id);
        b.node(s).pieces = detail::merged_pieces(b.node(s).pieces, other.pieces);
      } else {
        b.cut_window(other, X, Y, s, s);
        other_comp = detail::compact_comp();
      }
      b.node(s).zeros.push_back(zx);
      b.node(s).zeros.push_back(zy);
      if (&sp == &ls) singular_pair(detail::noncompact_comp(s), other_comp);
      else singular_pair(other_comp, detail::noncompact_comp(s));
    } else {
      throw PreconditionError("kind A joining a swallowed circle with a compact family is not supported");
    }
  }

  b.drop_orphan_markers();
  M.provenance.push_back("connected sum " + spec.name + " kind " + std::string(1, spec.kind) + " of " + L.name +
                         " and " + R.name + " at levels " + render(spec.x) + ", " + render(spec.y));
  M.origin = std::make_shared<SurgerySpec>(spec);
  finalize(M);
  return M;
}

/// Every singular leaf has one zero and no two zero levels differ by an
/// element of the period lattice.
inline bool is_generic(const FoliationModel& m) {
  for (const auto& s : m.singular)
    if (s.zeros.size() != 1) return false;
  auto zs = model_zeros(m);
  PeriodLattice lattice(period_values(model_periods(m)));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j)
      if (lattice.contains(zs[i].level - zs[j].level)) return false;
  return true;
}

namespace detail {

inline FoliationModel rebuild(const FoliationModel& m, const std::vector<Rational>& amps, std::size_t from) {
  if (!m.origin) return m;
  SurgerySpec s = *m.origin;
  std::size_t nl = model_zeros(*s.left).size(), nr = model_zeros(*s.right).size();
  s.left = std::make_shared<FoliationModel>(rebuild(*s.left, amps, from));
  s.right = std::make_shared<FoliationModel>(rebuild(*s.right, amps, from + nl));
  s.amplitudes[0] += amps[from + nl + nr];
  s.amplitudes[1] += amps[from + nl + nr + 1];
  return connected_sum(s);
}

}  // namespace detail

/// Shifts zero j by the exact amplitude j*delta, delta = 1/(7*2^k), taking
/// the first k that separates all levels modulo the period lattice. The
/// shift lives in the patch amplitudes, so periods and zeros are untouched.
inline FoliationModel make_generic(const FoliationModel& m, std::size_t attempts = 20,
                                   const Rational& bound = Rational(1, 2)) {
  auto zs = model_zeros(m);
  if (zs.size() <= 1 || is_generic(m)) return m;
  for (std::size_t k = 0; k < attempts; ++k) {
    Rational delta(1, 7 * (Integer(1) << k));
    std::vector<Rational> amps(zs.size());
    bool ok = true;
    for (std::size_t j = 0; j < amps.size(); ++j) {
      amps[j] = delta * static_cast<long>(j);
      if (amps[j] > bound) ok = false;
    }
    if (!ok) continue;
    try {
      FoliationModel g = detail::rebuild(m, amps, 0);
      if (is_generic(g)) {
        g.provenance.push_back("generic perturbation with step " + to_string(delta));
        return g;
      }
    } catch (const PreconditionError&) {
    }
  }
  throw NumericError("no admissible generic perturbation below amplitude bound " + to_string(bound) + " after " +
                     std::to_string(attempts) + " attempts");
}

inline ClosedForm make_generic(const ClosedForm&, const FoliationModel& m) { return make_generic(m).form; }

struct TransitivityReport {
  bool transitive = false;
  std::string criterion;
  bool genericized = false;
  FoliationGraph raw_graph;
  FoliationGraph graph;
  std::optional<std::string> note;
};

inline TransitivityReport transitivity(const FoliationModel& m) {
  TransitivityReport r;
  r.raw_graph = m.graph;
  r.graph = m.graph;
  if (model_zeros(m).empty()) {
    if (m.pieces.size() != 1) throw PreconditionError("zero-free model with several pieces");
    const Piece& p = m.pieces[0];
    if (p.form.linear_is_zero()) throw PreconditionError("form vanishes identically, so it is not of Morse type");
    r.transitive = std::any_of(p.periods.begin(), p.periods.end(), [](const Period& x) { return !x.value.is_zero(); });
    r.criterion = "is_transitive: zero-free form, a straight loop along an integer direction has positive period iff "
                  "some period is nonzero";
    return r;
  }
  if (is_generic(m)) {
    r.transitive = is_calabi(m.graph);
  } else {
    FoliationModel g = make_generic(m);
    r.genericized = true;
    r.graph = g.graph;
    r.transitive = is_calabi(g.graph);
  }
  r.criterion = "is_transitive: the foliation graph of the generic form is a Calabi graph (a positive walk joins every "
                "ordered pair of vertices)";
  if (m.origin && m.origin->kind == 'A') {
    bool lt = transitivity(*m.origin->left).transitive;
    bool rt = transitivity(*m.origin->right).transitive;
    if (lt != rt) r.note = "derived, not a stated result: kind A sum with exactly one transitive input";
  }
  return r;
}

inline bool is_transitive(const FoliationModel& m) { return transitivity(m).transitive; }

enum class Harmonicity { IntrinsicallyHarmonic, NotIntrinsicallyHarmonic };

inline const char* to_string(Harmonicity h) {
  return h == Harmonicity::IntrinsicallyHarmonic ? "IntrinsicallyHarmonic" : "NotIntrinsicallyHarmonic";
}

inline Harmonicity harmonicity_verdict(const FoliationModel& m) {
  return is_transitive(m) ? Harmonicity::IntrinsicallyHarmonic : Harmonicity::NotIntrinsicallyHarmonic;
}

/// For an all-compact model: each generator of a piece winds m = Per/P times
/// around the cycle of families carrying that piece, so its projected walk
/// has weight m times the cycle length. Generators whose group element
/// reverses the form have no positive circle direction and are skipped.
inline std::optional<FactorizationWitness> factorization_witness(const FoliationModel& m) {
  if (!all_leaves_compact(m)) return std::nullopt;
  FactorizationWitness w;
  w.graph = m.graph;
  for (const auto& e : w.graph.edges) w.cocycle.emplace(e.id, e.weight);
  for (const auto& piece : m.pieces) {
    SymScalar cycle(m.table);
    for (const auto& f : m.families)
      if (std::find(f.pieces.begin(), f.pieces.end(), piece.label) != f.pieces.end()) cycle += f.weight;
    for (const auto& per : piece.periods) {
      if (!per.element_preserves_form) {
        w.skipped.push_back(per.generator);
        continue;
      }
      if (!piece.circle_period) throw PreconditionError("piece " + piece.label + " has no circle period");
      auto wind = ratio(per.value, *piece.circle_period);
      if (!wind || !is_integer(*wind))
        throw PreconditionError("generator " + per.generator + " does not wind an integral number of times");
      w.checks.push_back({per.generator, per.value, cycle * *wind});
    }
  }
  return w;
}

}  // namespace foliage
