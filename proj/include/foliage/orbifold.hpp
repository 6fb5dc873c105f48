#pragma once

// Flat torus R^2/Z^2 with a finite group of affine maps acting on it, read
// as the action groupoid K x T^2 presenting the quotient orbifold. Points
// and path waypoints are exact rationals.

#include <foliage/error.hpp>
#include <foliage/scalar.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace foliage {

inline Rational frac(const Rational& r) {
  Integer fl = detail::floor_div(numerator(r), denominator(r));
  return r - Rational(fl);
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Lifted point of R^2; used for path waypoints so that line integrals see
/// the actual displacement rather than its reduction mod 1.
struct Vec2 {
  Rational x;
  Rational y;

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Point of T^2 with both coordinates reduced into [0,1).
struct TorusPoint {
  Rational theta;
  Rational phi;

  TorusPoint() = default;
  TorusPoint(Rational t, Rational p) : theta(frac(t)), phi(frac(p)) {}
  explicit TorusPoint(const Vec2& v) : TorusPoint(v.x, v.y) {}

  Vec2 lift() const { return {theta, phi}; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  friend bool operator<(const TorusPoint& a, const TorusPoint& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.phi < b.phi;
  }
};

inline std::string to_string(const TorusPoint& p) {
  return "(" + to_string(p.theta) + "," + to_string(p.phi) + ")";
}

/// Numeric point, used only by the tracer and figure output.
struct PointD {
  double x = 0;
  double y = 0;
};

/// x -> A x + b on R^2, descending to T^2. A is row-major.
struct AffineMap {
  std::array<int, 4> A{1, 0, 0, 1};
  Rational b1 = 0;
  Rational b2 = 0;

  int det() const { return A[0] * A[3] - A[1] * A[2]; }

  Vec2 apply(const Vec2& v) const {
    return {A[0] * v.x + A[1] * v.y + b1, A[2] * v.x + A[3] * v.y + b2};
  }
  TorusPoint apply(const TorusPoint& p) const { return TorusPoint(apply(p.lift())); }
  PointD apply(const PointD& p) const {
    return {A[0] * p.x + A[1] * p.y + to_double(b1), A[2] * p.x + A[3] * p.y + to_double(b2)};
  }

  /// Linear part only, for tangent vectors.
  PointD apply_linear(const PointD& v) const { return {A[0] * v.x + A[1] * v.y, A[2] * v.x + A[3] * v.y}; }

  /// (this o g)(x) = this(g(x)).
  AffineMap compose(const AffineMap& g) const {
    AffineMap r;
    r.A = {A[0] * g.A[0] + A[1] * g.A[2], A[0] * g.A[1] + A[1] * g.A[3],
           A[2] * g.A[0] + A[3] * g.A[2], A[2] * g.A[1] + A[3] * g.A[3]};
    r.b1 = A[0] * g.b1 + A[1] * g.b2 + b1;
    r.b2 = A[2] * g.b1 + A[3] * g.b2 + b2;
    return r;
  }

  bool is_linear_identity() const { return A == std::array<int, 4>{1, 0, 0, 1}; }

  /// Equality of the induced maps on T^2.
  bool same_on_torus(const AffineMap& o) const {
    return A == o.A && is_integer(b1 - o.b1) && is_integer(b2 - o.b2);
  }
};

inline std::string to_string(const AffineMap& g) {
  return std::to_string(g.A[0]) + " " + std::to_string(g.A[1]) + " " + std::to_string(g.A[2]) + " " +
         std::to_string(g.A[3]) + " ; " + to_string(g.b1) + " " + to_string(g.b2);
}

/// Finite group of torus automorphisms with the identity at index 0.
class GroupAction {
 public:
  GroupAction() : elements_{AffineMap{}} { build_tables(); }

  /// Validates closure, inverses and invertibility; prepends the identity
  /// when the list does not start with it.
  explicit GroupAction(std::vector<AffineMap> elements) {
    AffineMap id;
    auto it = std::find_if(elements.begin(), elements.end(), [&](const AffineMap& g) { return g.same_on_torus(id); });
    if (it != elements.end()) elements.erase(it);
    elements.insert(elements.begin(), id);
    for (auto& g : elements) {
      if (g.det() != 1 && g.det() != -1)
        throw ScenarioError("group element is not invertible over the integers: " + to_string(g));
      g.b1 = frac(g.b1);
      g.b2 = frac(g.b2);
    }
    for (std::size_t i = 0; i < elements.size(); ++i)
      for (std::size_t j = i + 1; j < elements.size(); ++j)
        if (elements[i].same_on_torus(elements[j]))
          throw ScenarioError("duplicate group element: " + to_string(elements[j]));
    elements_ = std::move(elements);
    build_tables();
  }

  std::size_t size() const noexcept { return elements_.size(); }
  const AffineMap& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<AffineMap>& elements() const noexcept { return elements_; }

  std::size_t compose(std::size_t i, std::size_t j) const { return table_[i][j]; }
  std::size_t inverse(std::size_t i) const { return inverse_.at(i); }

  std::size_t index_of(const AffineMap& g) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      if (elements_[i].same_on_torus(g)) return i;
    throw ScenarioError("element set is not closed under composition (missing " + to_string(g) + ")");
  }

 private:
  void build_tables() {
    const std::size_t n = elements_.size();
    table_.assign(n, std::vector<std::size_t>(n));
    inverse_.assign(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        table_[i][j] = index_of(elements_[i].compose(elements_[j]));
        if (table_[i][j] == 0) inverse_[i] = j;
      }
    for (std::size_t i = 0; i < n; ++i)
      if (inverse_[i] == n) throw ScenarioError("group element has no inverse: " + to_string(elements_[i]));
  }

  std::vector<AffineMap> elements_;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> inverse_;
};

struct OrbifoldPresentation {
  std::string name;
  GroupAction action;
  TorusPoint basepoint{Rational(1, 8), Rational(1, 8)};
};

inline OrbifoldPresentation make_orbifold(std::string name, GroupAction action) {
  OrbifoldPresentation O;
  O.name = std::move(name);
  O.action = std::move(action);
  return O;
}

inline OrbifoldPresentation torus() { return make_orbifold("torus", GroupAction{}); }

/// T^2 / {x -> x, x -> -x}: four cone points of order 2.
inline OrbifoldPresentation pillowcase() {
  AffineMap minus;
  minus.A = {-1, 0, 0, -1};
  return make_orbifold("pillowcase", GroupAction({AffineMap{}, minus}));
}

inline std::vector<TorusPoint> orbit(const TorusPoint& x, const OrbifoldPresentation& O) {
  std::vector<TorusPoint> out;
  for (const auto& g : O.action.elements()) {
    TorusPoint y = g.apply(x);
    if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t isotropy_order(const TorusPoint& x, const OrbifoldPresentation& O) {
  std::size_t n = 0;
  for (const auto& g : O.action.elements())
    if (g.apply(x) == x) ++n;
  return n;
}

/// Lexicographically smallest point of the orbit.
inline TorusPoint orbit_representative(const TorusPoint& x, const OrbifoldPresentation& O) {
  return orbit(x, O).front();
}

/// Isolated points with nontrivial isotropy: the solutions of (A - I) x = -b
/// mod 1 for elements with det(A - I) != 0. Elements whose fixed set is a
/// curve (reflections) contribute nothing here.
inline std::vector<TorusPoint> singular_points(const OrbifoldPresentation& O) {
  std::vector<TorusPoint> out;
  for (std::size_t k = 1; k < O.action.size(); ++k) {
    const auto& g = O.action.element(k);
    int m00 = g.A[0] - 1, m01 = g.A[1], m10 = g.A[2], m11 = g.A[3] - 1;
    int d = m00 * m11 - m01 * m10;
    if (d == 0) continue;
    int bound = std::abs(m00) + std::abs(m01) + std::abs(m10) + std::abs(m11) + 2;
    for (int n1 = -bound; n1 <= bound; ++n1)
      for (int n2 = -bound; n2 <= bound; ++n2) {
        Rational r1 = Rational(n1) - g.b1, r2 = Rational(n2) - g.b2;
        TorusPoint x((m11 * r1 - m01 * r2) / d, (m00 * r2 - m10 * r1) / d);
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// sigma_n g_n ... g_1 sigma_0. Each segment is a nonempty list of lifted
/// waypoints joined by straight pieces; arrows hold group element indices.
struct GPath {
  std::vector<std::vector<Vec2>> segments;
  std::vector<std::size_t> arrows;

  Vec2 start() const { return segments.front().front(); }
  Vec2 end() const { return segments.back().back(); }

  bool is_loop() const { return TorusPoint(start()) == TorusPoint(end()); }
};

/// Checks shape and exact arrow compatibility g_j . sigma_{j-1}(1) = sigma_j(0).
inline void validate(const GPath& p, const OrbifoldPresentation& O) {
  if (p.segments.empty()) throw PreconditionError("G-path has no segments");
  if (p.arrows.size() + 1 != p.segments.size())
    throw PreconditionError("G-path needs exactly one arrow between consecutive segments");
  for (const auto& s : p.segments)
    if (s.empty()) throw PreconditionError("G-path segment has no waypoints");
  for (std::size_t j = 0; j < p.arrows.size(); ++j) {
    if (p.arrows[j] >= O.action.size()) throw PreconditionError("G-path arrow names an unknown group element");
    TorusPoint moved = O.action.element(p.arrows[j]).apply(TorusPoint(p.segments[j].back()));
    if (!(moved == TorusPoint(p.segments[j + 1].front())))
      throw PreconditionError("G-path arrow " + std::to_string(j + 1) + " does not join its segments");
  }
}

inline GPath constant_path(const Vec2& x) { return {{{x}}, {}}; }

/// p then q, joined by a unit arrow.
inline GPath concat(const GPath& p, const GPath& q) {
  if (!(TorusPoint(p.end()) == TorusPoint(q.start())))
    throw PreconditionError("concat: end of first path " + to_string(TorusPoint(p.end())) +
                            " differs from start of second " + to_string(TorusPoint(q.start())));
  GPath r = p;
  r.arrows.push_back(0);
  r.segments.insert(r.segments.end(), q.segments.begin(), q.segments.end());
  r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
  return r;
}

inline GPath inverse(const GPath& p, const OrbifoldPresentation& O) {
  GPath r;
  for (auto it = p.segments.rbegin(); it != p.segments.rend(); ++it)
    r.segments.emplace_back(it->rbegin(), it->rend());
  for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) r.arrows.push_back(O.action.inverse(*it));
  return r;
}

/// Applies the concatenation and multiplication equivalences: segments
/// joined by a unit arrow merge (the second lifted by an integer
/// translation), constant interior segments fold their two arrows into one,
/// and repeated waypoints collapse.
inline GPath normalize(const GPath& p, const OrbifoldPresentation& O) {
  GPath r;
  r.segments.push_back(p.segments.front());
  for (std::size_t j = 0; j < p.arrows.size(); ++j) {
    const auto& next = p.segments[j + 1];
    auto& last = r.segments.back();
    if (p.arrows[j] == 0) {
      Vec2 shift = last.back() - next.front();
      for (const auto& w : next) last.push_back(w + shift);
      continue;
    }
    bool constant = std::all_of(last.begin(), last.end(), [&](const Vec2& w) { return w == last.front(); });
    if (constant && r.segments.size() > 1) {
      // ... h [x] g sigma  ~  ... (g h) sigma
      std::size_t h = r.arrows.back();
      r.arrows.back() = O.action.compose(p.arrows[j], h);
      r.segments.back() = next;
      continue;
    }
    r.arrows.push_back(p.arrows[j]);
    r.segments.push_back(next);
  }
  for (auto& s : r.segments) s.erase(std::unique(s.begin(), s.end()), s.end());
  // A unit arrow produced by folding merges its neighbours as well.
  for (std::size_t j = 0; j < r.arrows.size();) {
    if (r.arrows[j] != 0) {
      ++j;
      continue;
    }
    auto& a = r.segments[j];
    const auto b = r.segments[j + 1];
    Vec2 shift = a.back() - b.front();
    for (std::size_t k = 1; k < b.size(); ++k) a.push_back(b[k] + shift);
    r.segments.erase(r.segments.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    r.arrows.erase(r.arrows.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return r;
}

/// Image of a path under a group element, waypoint by waypoint (lifted).
inline std::vector<Vec2> image(const AffineMap& g, const std::vector<Vec2>& seg) {
  std::vector<Vec2> out;
  out.reserve(seg.size());
  for (const auto& w : seg) out.push_back(g.apply(w));
  return out;
}

struct GeneratorLoop {
  std::string id;
  GPath path;
  std::size_t element = 0;  // 0 for the torus loops a and b
};

/// Representative of v mod Z^2 in (-1/2, 1/2]^2.
inline Vec2 centered(const Vec2& v) {
  auto c = [](const Rational& r) {
    Rational f = frac(r);
    return f > Rational(1, 2) ? Rational(f - 1) : f;
  };
  return {c(v.x), c(v.y)};
}

/// Loops a, b at the basepoint, and for each nonidentity element k the loop
/// (sigma, k): sigma runs straight from x0 to a lift of k.x0, and the arrow
/// k^-1 returns to x0.
inline std::vector<GeneratorLoop> fundamental_generators(const OrbifoldPresentation& O) {
  const Vec2 x0 = O.basepoint.lift();
  if (isotropy_order(O.basepoint, O) != 1) throw PreconditionError("basepoint must have trivial isotropy");
  std::vector<GeneratorLoop> out;
  out.push_back({"a", {{{x0, x0 + Vec2{1, 0}}}, {}}, 0});
  out.push_back({"b", {{{x0, x0 + Vec2{0, 1}}}, {}}, 0});
  for (std::size_t k = 1; k < O.action.size(); ++k) {
    Vec2 d = centered(O.action.element(k).apply(x0) - x0);
    GPath p{{{x0, x0 + d}, {x0}}, {O.action.inverse(k)}};
    out.push_back({"k" + std::to_string(k), std::move(p), k});
  }
  return out;
}

}  // namespace foliage
