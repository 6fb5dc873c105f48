#pragma once

// Closed 1-forms a dtheta + b dphi + sum of exact bump terms on a torus
// quotient, plus the zero records contributed by surgery patches.

#include <foliage/error.hpp>
#include <foliage/orbifold.hpp>
#include <foliage/scalar.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace foliage {

/// amplitude * h(dist(x, c)) summed over the K-orbit of the center, with
/// h(r) = (1 - r^2/R^2)^4 inside radius R.
struct BumpTerm {
  TorusPoint center;
  Rational radius;
  SymScalar amplitude;
};

struct Zero {
  std::size_t id = 0;
  std::string host;
  int index = 1;
  std::size_t isotropy_order = 1;
  SymScalar level;
  int dimension = 2;
};

/// Level bookkeeping of one connected-sum tube: two index-1 zeros. The
/// effective level of zero i is levels[i] + amplitudes[i]; amplitudes are
/// the exact terms added by make_generic.
struct SurgeryPatch {
  std::size_t id = 0;
  char kind = 'A';
  std::array<std::size_t, 2> zeros{};
  std::array<SymScalar, 2> levels;
  std::array<Rational, 2> amplitudes{0, 0};

  SymScalar level(int i) const { return levels[i] + SymScalar(levels[i].table(), amplitudes[i]); }
};

struct ClosedForm {
  TablePtr table;
  SymScalar a;
  SymScalar b;
  std::vector<BumpTerm> bumps;
  std::vector<SurgeryPatch> patches;
  bool basic_override = false;

  static ClosedForm linear(const TablePtr& t, SymScalar a, SymScalar b) {
    ClosedForm f;
    f.table = t;
    f.a = std::move(a);
    f.b = std::move(b);
    return f;
  }

  bool is_patched() const { return !patches.empty(); }
  bool linear_is_zero() const { return a.is_zero() && b.is_zero(); }
};

namespace detail {

inline Rational torus_dist2(const TorusPoint& x, const TorusPoint& c) {
  Vec2 d = centered(x.lift() - c.lift());
  return d.x * d.x + d.y * d.y;
}

inline Rational bump_profile(const Rational& r2, const Rational& radius) {
  Rational R2 = radius * radius;
  if (r2 >= R2) return 0;
  Rational u = 1 - r2 / R2;
  return u * u * u * u;
}

inline bool preserves(const AffineMap& g, const SymScalar& a, const SymScalar& b) {
  // A^T (a, b) = (a, b)
  SymScalar na = a * Rational(g.A[0]) + b * Rational(g.A[2]);
  SymScalar nb = a * Rational(g.A[1]) + b * Rational(g.A[3]);
  return na == a && nb == b;
}

inline bool orthogonal(const AffineMap& g) {
  return g.A[0] * g.A[0] + g.A[2] * g.A[2] == 1 && g.A[1] * g.A[1] + g.A[3] * g.A[3] == 1 &&
         g.A[0] * g.A[1] + g.A[2] * g.A[3] == 0;
}

}  // namespace detail

/// Largest value of |dh/dr| for h(r) = (1 - r^2/R^2)^4, attained at r = R/sqrt(7).
inline double max_bump_slope(const Rational& radius) {
  return 8.0 * 216.0 / (343.0 * std::sqrt(7.0) * to_double(radius));
}

/// Exact check that the support disks of all bump copies are pairwise
/// disjoint and embedded.
inline void validate_bumps(const ClosedForm& w, const OrbifoldPresentation& O) {
  struct Disk {
    TorusPoint c;
    Rational r;
  };
  std::vector<Disk> disks;
  for (const auto& bump : w.bumps) {
    if (bump.radius <= 0 || bump.radius >= Rational(1, 2))
      throw PreconditionError("bump radius must lie in (0, 1/2)");
    for (const auto& c : orbit(bump.center, O)) disks.push_back({c, bump.radius});
  }
  for (std::size_t i = 0; i < disks.size(); ++i)
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      Rational s = disks[i].r + disks[j].r;
      if (detail::torus_dist2(disks[i].c, disks[j].c) < s * s)
        throw PreconditionError("bump supports overlap near " + to_string(disks[i].c) + " and " +
                                to_string(disks[j].c));
    }
}

/// The exact part f of the form (w = linear + df), evaluated at x.
inline SymScalar bump_primitive(const ClosedForm& w, const OrbifoldPresentation& O, const TorusPoint& x) {
  SymScalar f(w.table);
  for (const auto& bump : w.bumps)
    for (const auto& c : orbit(bump.center, O))
      f += bump.amplitude * detail::bump_profile(detail::torus_dist2(x, c), bump.radius);
  return f;
}

/// Numeric gradient of the exact part at x.
inline PointD bump_gradient(const ClosedForm& w, const OrbifoldPresentation& O, const PointD& x) {
  PointD g{0, 0};
  for (const auto& bump : w.bumps) {
    double R = to_double(bump.radius);
    double amp = to_double(bump.amplitude);
    for (const auto& c : orbit(bump.center, O)) {
      double dx = x.x - to_double(c.theta), dy = x.y - to_double(c.phi);
      dx -= std::round(dx);
      dy -= std::round(dy);
      double r2 = dx * dx + dy * dy;
      if (r2 >= R * R) continue;
      double u = 1 - r2 / (R * R);
      double k = amp * 4 * u * u * u * (-2 / (R * R));
      g.x += k * dx;
      g.y += k * dy;
    }
  }
  return g;
}

struct BasicVerdict {
  bool honest = false;    // invariance actually holds
  bool overridden = false;
  bool accepted() const { return honest || overridden; }
};

/// Pullback invariance of the linear part under every element, and orbit
/// symmetry of the bumps (copies are congruent only under orthogonal A).
inline BasicVerdict basic_verdict(const ClosedForm& w, const OrbifoldPresentation& O) {
  BasicVerdict v;
  v.honest = true;
  for (const auto& g : O.action.elements()) {
    if (!detail::preserves(g, w.a, w.b)) v.honest = false;
    if (!w.bumps.empty() && !detail::orthogonal(g)) v.honest = false;
  }
  v.overridden = w.basic_override;
  return v;
}

inline bool check_basic(const ClosedForm& w, const OrbifoldPresentation& O) {
  return basic_verdict(w, O).accepted();
}

/// Zeros of the form: those recorded by surgery patches. The linear+bump
/// layer is zero-free as long as no bump dominates the linear part.
inline std::vector<Zero> zeros(const ClosedForm& w) {
  if (!w.bumps.empty()) {
    double lin = std::hypot(to_double(w.a), to_double(w.b));
    for (const auto& bump : w.bumps)
      if (std::abs(to_double(bump.amplitude)) * max_bump_slope(bump.radius) >= lin)
        throw PreconditionError("bump at " + to_string(bump.center) +
                                " dominates the linear part; the small-perturbation regime is violated");
  }
  std::vector<Zero> out;
  for (const auto& p : w.patches)
    for (int i = 0; i < 2; ++i) {
      Zero z;
      z.id = p.zeros[i];
      z.host = "patch " + std::to_string(p.id);
      z.index = 1;
      z.isotropy_order = 1;
      z.level = p.level(i);
      out.push_back(std::move(z));
    }
  std::sort(out.begin(), out.end(), [](const Zero& x, const Zero& y) { return x.id < y.id; });
  return out;
}

/// Sum over segments of the line integrals: linear part in closed form on
/// each straight piece, exact part as f(end) - f(start).
inline SymScalar g_path_integral(const ClosedForm& w, const OrbifoldPresentation& O, const GPath& p) {
  if (w.is_patched())
    throw PreconditionError("path integral over a patched form; patched models integrate through the graph layer");
  validate(p, O);
  SymScalar total(w.table);
  for (const auto& seg : p.segments) {
    Vec2 d = seg.back() - seg.front();
    total += w.a * d.x + w.b * d.y;
    if (!w.bumps.empty())
      total += bump_primitive(w, O, TorusPoint(seg.back())) - bump_primitive(w, O, TorusPoint(seg.front()));
  }
  return total;
}

struct Period {
  std::string generator;
  SymScalar value;
  std::size_t element = 0;
  bool element_preserves_form = true;
};

inline std::vector<Period> periods(const ClosedForm& w, const OrbifoldPresentation& O) {
  if (!check_basic(w, O)) throw PreconditionError("form is not basic for the action and no override is set");
  std::vector<Period> out;
  for (const auto& loop : fundamental_generators(O)) {
    Period p;
    p.generator = loop.id;
    p.value = g_path_integral(w, O, loop.path);
    p.element = loop.element;
    p.element_preserves_form = detail::preserves(O.action.element(loop.element), w.a, w.b);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<SymScalar> period_values(const std::vector<Period>& ps) {
  std::vector<SymScalar> v;
  for (const auto& p : ps) v.push_back(p.value);
  return v;
}

inline std::size_t rank_of_class(const ClosedForm& w, const OrbifoldPresentation& O) {
  return q_rank(period_values(periods(w, O)));
}

/// Positive generator of the period group on loops whose element preserves
/// the form, when that group is cyclic and nontrivial. This is the length
/// of the leaf-space circle of a compact linear foliation.
inline std::optional<SymScalar> circle_period(const std::vector<Period>& ps) {
  std::vector<SymScalar> vals;
  for (const auto& p : ps)
    if (p.element_preserves_form && !p.value.is_zero()) vals.push_back(p.value);
  if (vals.empty() || q_rank(vals) != 1) return std::nullopt;
  const SymScalar& u = vals.front();
  Integer num = 0, den = 1;
  for (const auto& v : vals) {
    Rational r = *ratio(v, u);
    num = boost::multiprecision::gcd(num, numerator(r));
    den = boost::multiprecision::lcm(den, denominator(r));
  }
  SymScalar g = u * Rational(num, den);
  if (sign(g) == Sign::neg) g = -g;
  return g;
}

}  // namespace foliage
