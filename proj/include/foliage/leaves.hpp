#pragma once

// Leaf classification for linear+bump forms, the numeric leaf tracer used as
// an independent oracle, and component counts of the local quadratic models.

#include <foliage/error.hpp>
#include <foliage/forms.hpp>
#include <foliage/orbifold.hpp>
#include <foliage/scalar.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace foliage {

enum class LeafKind { CompactRegular, NoncompactRegular, CompactSingular, NoncompactSingular };

inline const char* to_string(LeafKind k) {
  switch (k) {
    case LeafKind::CompactRegular: return "CompactRegular";
    case LeafKind::NoncompactRegular: return "NoncompactRegular";
    case LeafKind::CompactSingular: return "CompactSingular";
    case LeafKind::NoncompactSingular: return "NoncompactSingular";
  }
  return "?";
}

inline bool is_singular(LeafKind k) { return k == LeafKind::CompactSingular || k == LeafKind::NoncompactSingular; }

/// Where a leaf component sits in the decomposition X = X_c u X_inf.
enum class Placement { Xc, Boundary, XInf };

inline const char* to_string(Placement p) {
  switch (p) {
    case Placement::Xc: return "X_c";
    case Placement::Boundary: return "boundary";
    case Placement::XInf: return "X_inf";
  }
  return "?";
}

struct LeafComponent {
  std::size_t id = 0;
  bool compact = true;
  Placement placement = Placement::Xc;
  std::size_t inf_component = 0;  // meaningful when placement == XInf
  bool from_tube = false;         // the tube circle of a level-coincident connected sum
};

struct LeafClass {
  std::string id;
  LeafKind kind = LeafKind::CompactRegular;
  std::vector<std::size_t> zeros;
  std::vector<LeafComponent> components;
  std::optional<TorusPoint> representative;
  std::string locus;
};

/// Compact iff the kernel direction (b, -a) has rational slope, i.e. the
/// linear coefficients span a Q-space of dimension at most 1. Bumps that
/// respect the nondominance bound do not change the verdict.
inline LeafClass classify_leaf(const ClosedForm& w, const OrbifoldPresentation& O, const TorusPoint& x) {
  if (w.is_patched()) throw PreconditionError("point lies in a surgery-patched model; classify through the surgery layer");
  if (w.linear_is_zero()) throw PreconditionError("the form vanishes at " + to_string(x));
  zeros(w);
  LeafClass c;
  TorusPoint rep = orbit_representative(x, O);
  c.representative = rep;
  c.locus = "through " + to_string(rep);
  c.id = "leaf" + to_string(rep);
  bool compact = q_rank(std::vector<SymScalar>{w.a, w.b}) <= 1;
  c.kind = compact ? LeafKind::CompactRegular : LeafKind::NoncompactRegular;
  c.components.push_back({0, compact, compact ? Placement::Xc : Placement::XInf, 0});
  return c;
}

/// Components of a singular leaf; regular leaves are rejected.
inline std::vector<LeafComponent> singular_components(const LeafClass& leaf) {
  if (!is_singular(leaf.kind)) throw PreconditionError("leaf " + leaf.id + " is not singular");
  return leaf.components;
}

struct TraceConfig {
  double step = 1e-3;
  std::size_t max_steps = 1'000'000;
  double tolerance = 1e-9;
  double epsilon = 0.05;
  double coverage = 0.99;
  double dense_min_length = 100.0;
  double drift_tolerance = 1e-6;
  std::size_t max_polyline = 20000;
};

enum class TraceVerdict { Closed, DenseEvidence, Inconclusive };

inline const char* to_string(TraceVerdict v) {
  switch (v) {
    case TraceVerdict::Closed: return "Closed";
    case TraceVerdict::DenseEvidence: return "DenseEvidence";
    case TraceVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct TraceResult {
  std::vector<PointD> polyline;  // lifted positions, subsampled
  TraceVerdict verdict = TraceVerdict::Inconclusive;
  double period_length = 0;
  double covered_fraction = 0;
  double return_error = 0;
  std::size_t steps = 0;
  std::string note;
};

namespace detail {

struct NumericForm {
  double a = 0;
  double b = 0;
  struct Copy {
    double cx, cy, R, amp;
  };
  std::vector<Copy> copies;

  NumericForm(const ClosedForm& w, const OrbifoldPresentation& O) : a(to_double(w.a)), b(to_double(w.b)) {
    for (const auto& bump : w.bumps)
      for (const auto& c : orbit(bump.center, O))
        copies.push_back({to_double(c.theta), to_double(c.phi), to_double(bump.radius), to_double(bump.amplitude)});
  }

  PointD omega(const PointD& x) const {
    PointD g{a, b};
    for (const auto& c : copies) {
      double dx = x.x - c.cx, dy = x.y - c.cy;
      dx -= std::round(dx);
      dy -= std::round(dy);
      double r2 = dx * dx + dy * dy, R2 = c.R * c.R;
      if (r2 >= R2) continue;
      double u = 1 - r2 / R2;
      double k = c.amp * 4 * u * u * u * (-2 / R2);
      g.x += k * dx;
      g.y += k * dy;
    }
    return g;
  }

  // Primitive along a lifted path: a x + b y + f(x).
  double primitive(const PointD& x) const {
    double f = a * x.x + b * x.y;
    for (const auto& c : copies) {
      double dx = x.x - c.cx, dy = x.y - c.cy;
      dx -= std::round(dx);
      dy -= std::round(dy);
      double r2 = dx * dx + dy * dy, R2 = c.R * c.R;
      if (r2 >= R2) continue;
      double u = 1 - r2 / R2;
      f += c.amp * u * u * u * u;
    }
    return f;
  }
};

inline double wrap_delta(double d) { return d - std::round(d); }

}  // namespace detail

/// Integrates the unit kernel field of the form from the seed with fixed-step
/// RK4 on the lifted plane. Closed when the trace returns within tolerance of
/// a K-image of the seed with parallel direction; DenseEvidence when the
/// epsilon-grid coverage of the traced leaf (with its K-images) reaches the
/// threshold after at least dense_min_length of arc.
inline TraceResult trace_leaf(const ClosedForm& w, const OrbifoldPresentation& O, const TorusPoint& seed,
                              const TraceConfig& cfg = {}) {
  if (w.is_patched()) throw PreconditionError("tracing across surgery patches is not supported");
  zeros(w);
  detail::NumericForm F(w, O);
  TraceResult out;
  const double h = cfg.step;

  bool degenerate = false;
  auto field = [&](const PointD& x) {
    PointD g = F.omega(x);
    double n = std::hypot(g.x, g.y);
    if (n < 1e-8) {
      degenerate = true;
      return PointD{0, 0};
    }
    return PointD{g.y / n, -g.x / n};
  };
  auto rk4 = [&](const PointD& x, double dt) {
    PointD k1 = field(x);
    PointD k2 = field({x.x + dt / 2 * k1.x, x.y + dt / 2 * k1.y});
    PointD k3 = field({x.x + dt / 2 * k2.x, x.y + dt / 2 * k2.y});
    PointD k4 = field({x.x + dt * k3.x, x.y + dt * k3.y});
    return PointD{x.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                  x.y + dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
  };

  const PointD x0{to_double(seed.theta), to_double(seed.phi)};
  const PointD v0 = field(x0);
  if (degenerate) {
    out.note = "form numerically vanishes at the seed";
    return out;
  }
  struct Target {
    PointD p;
    PointD dir;
  };
  std::vector<Target> targets;
  for (const auto& g : O.action.elements()) {
    PointD d = g.apply_linear(v0);
    targets.push_back({g.apply(x0), d});
  }

  const int cells = std::max(1, static_cast<int>(std::lround(1.0 / cfg.epsilon)));
  std::vector<char> covered(static_cast<std::size_t>(cells) * cells, 0);
  std::size_t covered_count = 0;
  auto mark = [&](const PointD& x) {
    for (const auto& g : O.action.elements()) {
      PointD y = g.apply(x);
      double u = y.x - std::floor(y.x), v = y.y - std::floor(y.y);
      int i = std::min(cells - 1, static_cast<int>(u * cells));
      int j = std::min(cells - 1, static_cast<int>(v * cells));
      char& c = covered[static_cast<std::size_t>(i) * cells + j];
      if (!c) {
        c = 1;
        ++covered_count;
      }
    }
  };

  const double F0 = F.primitive(x0);
  const std::size_t stride = std::max<std::size_t>(1, cfg.max_steps / cfg.max_polyline);
  PointD x = x0;
  out.polyline.push_back(x);
  mark(x);
  const double min_return = 4 * h;

  for (std::size_t k = 0; k < cfg.max_steps; ++k) {
    PointD y = rk4(x, h);
    if (degenerate) {
      out.note = "form numerically vanishes along the trace";
      out.steps = k;
      return out;
    }
    if (std::abs(F.primitive(y) - F0) > cfg.drift_tolerance)
      throw NumericError("step too large: primitive drift along the traced leaf exceeds " +
                         std::to_string(cfg.drift_tolerance));
    const double s0 = static_cast<double>(k) * h;
    if (s0 + h > min_return) {
      for (const auto& t : targets) {
        // Nearest lift of the target to the chord, then golden-section
        // refinement of the sub-step.
        double dx = detail::wrap_delta(t.p.x - x.x), dy = detail::wrap_delta(t.p.y - x.y);
        PointD tp{x.x + dx, x.y + dy};
        double cx = y.x - x.x, cy = y.y - x.y;
        double len2 = cx * cx + cy * cy;
        double proj = (dx * cx + dy * cy) / len2;
        if (proj < -0.5 || proj > 1.5) continue;
        double perp = std::abs(dx * cy - dy * cx) / std::sqrt(len2);
        if (perp > 10 * h) continue;
        auto dist = [&](double dt) {
          PointD z = rk4(x, dt);
          return std::hypot(z.x - tp.x, z.y - tp.y);
        };
        double lo = 0, hi = h;
        const double phi = (std::sqrt(5.0) - 1) / 2;
        double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
        double f1 = dist(m1), f2 = dist(m2);
        for (int it = 0; it < 80; ++it) {
          if (f1 < f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - phi * (hi - lo);
            f1 = dist(m1);
          } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + phi * (hi - lo);
            f2 = dist(m2);
          }
        }
        double tbest = (lo + hi) / 2;
        double err = dist(tbest);
        if (err >= cfg.tolerance) continue;
        PointD z = rk4(x, tbest);
        PointD v = field(z);
        double cross = v.x * t.dir.y - v.y * t.dir.x;
        double tn = std::hypot(t.dir.x, t.dir.y);
        if (std::abs(cross) > 1e-6 * tn) continue;
        out.polyline.push_back(z);
        out.verdict = TraceVerdict::Closed;
        out.period_length = s0 + tbest;
        out.return_error = err;
        out.steps = k + 1;
        out.covered_fraction = static_cast<double>(covered_count) / covered.size();
        return out;
      }
    }
    x = y;
    mark(x);
    if ((k + 1) % stride == 0) out.polyline.push_back(x);
    const double s = s0 + h;
    if (s >= cfg.dense_min_length && (k + 1) % 1000 == 0) {
      double frac_cov = static_cast<double>(covered_count) / covered.size();
      if (frac_cov >= cfg.coverage) {
        out.polyline.push_back(x);
        out.verdict = TraceVerdict::DenseEvidence;
        out.covered_fraction = frac_cov;
        out.steps = k + 1;
        out.period_length = s;
        return out;
      }
    }
  }
  out.polyline.push_back(x);
  out.steps = cfg.max_steps;
  out.covered_fraction = static_cast<double>(covered_count) / covered.size();
  out.note = "max_steps exhausted";
  return out;
}

enum class LocalGroup { trivial, z2_reflect_last };

/// Component counts of {-sum_{i<=lambda} y_i^2 + sum_{i>lambda} y_i^2 = t}
/// for t < 0, t = 0, t > 0, modulo the group. The level set is
/// S^{lambda-1} x R^{n-lambda} below and S^{n-lambda-1} x R^lambda above;
/// an S^0 factor gives two sheets, S^-1 none. Coordinates are ordered with
/// the negative directions last, so z2_reflect_last flips a negative
/// direction whenever lambda >= 1.
inline std::tuple<int, int, int> count_local_components(int n, int lambda, LocalGroup group) {
  if (n < 0 || n > 4) throw PreconditionError("local model dimension must lie in 0..4");
  if (lambda < 0 || lambda > n) throw PreconditionError("index exceeds dimension");
  auto sheets = [](int sphere_dim) { return sphere_dim < 0 ? 0 : (sphere_dim == 0 ? 2 : 1); };
  int below = sheets(lambda - 1);
  int above = sheets(n - lambda - 1);
  int at = 1;
  if (group == LocalGroup::z2_reflect_last && n > 0) {
    bool flips_negative = lambda >= 1;
    if (flips_negative && below == 2) below = 1;
    if (!flips_negative && above == 2) above = 1;
  }
  return {below, at, above};
}

}  // namespace foliage
