#pragma once

// Exact arithmetic in a finite-dimensional Q-vector space spanned by named
// real constants ("symbols"). The constant 1 is always symbol 0 ("one");
// every other symbol is declared Q-linearly independent of the rest, which
// makes coefficient-wise equality sound. Signs are decided by interval
// evaluation of the numeric embedding at doubling precision.

#include <foliage/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace foliage {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline Integer to_integer(std::string_view digits) { return Integer(std::string(digits)); }

inline Integer pow10(unsigned n) {
  Integer r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Parses "-12", "3/4", "1.25" or "-0.5" exactly. Returns nullopt on any
/// other shape.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  auto s = detail::trim(text);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
    s = detail::trim(s);
  }
  if (s.empty()) return std::nullopt;
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = detail::trim(s.substr(0, slash));
    auto den = detail::trim(s.substr(slash + 1));
    if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
    Integer d = detail::to_integer(den);
    if (d == 0) return std::nullopt;
    value = Rational(detail::to_integer(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !detail::all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !detail::all_digits(frac)) return std::nullopt;
    Integer w = whole.empty() ? Integer(0) : detail::to_integer(whole);
    Integer f = frac.empty() ? Integer(0) : detail::to_integer(frac);
    Integer scale = detail::pow10(static_cast<unsigned>(frac.size()));
    value = Rational(w * scale + f, scale);
  } else {
    if (!detail::all_digits(s)) return std::nullopt;
    value = Rational(detail::to_integer(s));
  }
  return neg ? Rational(-value) : value;
}

inline Rational parse_rational(std::string_view text) {
  auto r = try_parse_rational(text);
  if (!r) throw ScenarioError("not a rational number: '" + std::string(text) + "'");
  return *r;
}

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Closed interval with exact rational endpoints.
struct Enclosure {
  Rational lo;
  Rational hi;
};

/// How a symbol's numeric value is specified. Values are either exact
/// rationals (decimals are exact) or c*sqrt(r), which is enclosed on demand.
struct SymbolValue {
  Rational factor = 1;
  std::optional<Rational> radicand;  // absent: value is exactly `factor`

  static SymbolValue parse(std::string_view text) {
    auto s = detail::trim(text);
    SymbolValue v;
    auto sq = s.find("sqrt(");
    if (sq == std::string_view::npos) {
      auto r = try_parse_rational(s);
      if (!r) throw ScenarioError("bad symbol value '" + std::string(text) + "'");
      v.factor = *r;
    } else {
      if (s.back() != ')') throw ScenarioError("bad symbol value '" + std::string(text) + "'");
      auto prefix = detail::trim(s.substr(0, sq));
      if (!prefix.empty()) {
        if (prefix == "-") {
          v.factor = -1;
        } else {
          if (prefix.back() != '*') throw ScenarioError("bad symbol value '" + std::string(text) + "'");
          auto f = try_parse_rational(prefix.substr(0, prefix.size() - 1));
          if (!f) throw ScenarioError("bad symbol value '" + std::string(text) + "'");
          v.factor = *f;
        }
      }
      auto inner = s.substr(sq + 5, s.size() - sq - 6);
      auto r = try_parse_rational(inner);
      if (!r || *r <= 0) throw ScenarioError("sqrt needs a positive rational: '" + std::string(text) + "'");
      v.radicand = *r;
    }
    if (v.factor == 0) throw ScenarioError("symbol value must be nonzero: '" + std::string(text) + "'");
    return v;
  }

  /// Enclosure of width at most 2*|factor|*10^-digits containing the value.
  Enclosure enclose(unsigned digits) const {
    if (!radicand) return {factor, factor};
    // sqrt(u/v) = sqrt(u*v)/v; bracket sqrt(u*v*10^(2d)) by integer roots.
    const Integer& u = numerator(*radicand);
    const Integer& w = denominator(*radicand);
    Integer scale = detail::pow10(digits);
    Integer s = boost::multiprecision::sqrt(Integer(u * w * scale * scale));
    Rational lo(s, w * scale);
    Rational hi(Integer(s + 1), w * scale);
    if (factor < 0) return {factor * hi, factor * lo};
    return {factor * lo, factor * hi};
  }

  std::string render() const {
    if (!radicand) return to_string(factor);
    std::string out = "sqrt(" + to_string(*radicand) + ")";
    if (factor == 1) return out;
    return to_string(factor) + "*" + out;
  }

  friend bool operator==(const SymbolValue&, const SymbolValue&) = default;
};

/// Ordered list of basis constants. Index 0 is always "one" (value 1).
class SymbolTable {
 public:
  struct Symbol {
    std::string name;
    SymbolValue value;
    bool independent = true;
  };

  static constexpr unsigned kDefaultPrecision = 256;

  SymbolTable() { symbols_.push_back({"one", SymbolValue{}, false}); }

  std::size_t add(std::string name, SymbolValue value, bool independent = true) {
    if (!valid_name(name)) throw ScenarioError("invalid symbol name '" + name + "'");
    if (index_of(name)) throw ScenarioError("duplicate symbol '" + name + "'");
    symbols_.push_back({std::move(name), value, independent});
    return symbols_.size() - 1;
  }

  std::size_t add(std::string name, std::string_view value_text, bool independent = true) {
    return add(std::move(name), SymbolValue::parse(value_text), independent);
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return i;
    return std::nullopt;
  }

  /// Decimal-digit ceiling for sign evaluation.
  unsigned precision() const noexcept { return precision_; }
  void set_precision(unsigned digits) { precision_ = std::max(16u, digits); }

  static bool valid_name(std::string_view n) {
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n.front())) || n.front() == '_')) return false;
    return std::all_of(n.begin(), n.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

 private:
  std::vector<Symbol> symbols_;
  unsigned precision_ = kDefaultPrecision;
};

using TablePtr = std::shared_ptr<const SymbolTable>;

enum class Sign { neg = -1, zero = 0, pos = 1 };

inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

/// Element of the Q-span of a symbol table. Immutable in spirit: every
/// operation returns a fresh value; storage is sparse and canonical (no
/// stored zero coefficients).
class SymScalar {
 public:
  SymScalar() = default;
  explicit SymScalar(TablePtr table) : table_(std::move(table)) {}
  SymScalar(TablePtr table, const Rational& r) : table_(std::move(table)) {
    if (r != 0) coeffs_[0] = r;
  }

  static SymScalar symbol(TablePtr table, std::size_t index, const Rational& c = 1) {
    if (index >= table->size()) throw PreconditionError("symbol index out of range");
    SymScalar s(std::move(table));
    if (c != 0) s.coeffs_[index] = c;
    return s;
  }

  const TablePtr& table() const noexcept { return table_; }
  const std::map<std::size_t, Rational>& terms() const noexcept { return coeffs_; }

  Rational coeff(std::size_t i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  Rational rational_part() const { return coeff(0); }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  SymScalar operator-() const {
    SymScalar r = *this;
    for (auto& [i, c] : r.coeffs_) c = -c;
    return r;
  }

  friend SymScalar operator+(const SymScalar& a, const SymScalar& b) {
    SymScalar r(common_table(a, b));
    r.coeffs_ = a.coeffs_;
    for (const auto& [i, c] : b.coeffs_) {
      auto& slot = r.coeffs_[i];
      slot += c;
      if (slot == 0) r.coeffs_.erase(i);
    }
    return r;
  }
  friend SymScalar operator-(const SymScalar& a, const SymScalar& b) { return a + (-b); }

  friend SymScalar operator*(const Rational& k, const SymScalar& a) {
    SymScalar r(a.table_);
    if (k == 0) return r;
    for (const auto& [i, c] : a.coeffs_) r.coeffs_[i] = k * c;
    return r;
  }
  friend SymScalar operator*(const SymScalar& a, const Rational& k) { return k * a; }

  SymScalar& operator+=(const SymScalar& b) { return *this = *this + b; }
  SymScalar& operator-=(const SymScalar& b) { return *this = *this - b; }

  friend bool operator==(const SymScalar& a, const SymScalar& b) {
    common_table(a, b);
    return a.coeffs_ == b.coeffs_;
  }

  static TablePtr common_table(const SymScalar& a, const SymScalar& b) {
    if (!a.table_) return b.table_;
    if (!b.table_) return a.table_;
    if (a.table_ != b.table_) throw PreconditionError("symbol table mismatch");
    return a.table_;
  }

 private:
  TablePtr table_;
  std::map<std::size_t, Rational> coeffs_;
};

inline SymScalar add(const SymScalar& a, const SymScalar& b) { return a + b; }

/// True iff every non-"one" coefficient vanishes.
inline bool is_rational(const SymScalar& a) {
  return std::all_of(a.terms().begin(), a.terms().end(), [](const auto& t) { return t.first == 0; });
}

/// Interval enclosure of the numeric embedding at `digits` decimal digits.
inline Enclosure enclose(const SymScalar& a, unsigned digits) {
  Enclosure e{0, 0};
  for (const auto& [i, c] : a.terms()) {
    Enclosure v = a.table()->symbol(i).value.enclose(digits);
    if (c >= 0) {
      e.lo += c * v.lo;
      e.hi += c * v.hi;
    } else {
      e.lo += c * v.hi;
      e.hi += c * v.lo;
    }
  }
  return e;
}

/// Sign of the numeric value. Zero exactly when all coefficients vanish;
/// otherwise evaluated in interval arithmetic at 16, 32, 64, ... digits up to
/// the table's precision ceiling.
inline Sign sign(const SymScalar& a) {
  if (a.is_zero()) return Sign::zero;
  const unsigned ceiling = a.table() ? a.table()->precision() : SymbolTable::kDefaultPrecision;
  for (unsigned d = 16;; d *= 2) {
    unsigned digits = std::min(d, ceiling);
    Enclosure e = enclose(a, digits);
    if (e.lo > 0) return Sign::pos;
    if (e.hi < 0) return Sign::neg;
    if (digits == ceiling) break;
  }
  throw NumericError("precision exhausted deciding the sign of a nonzero combination; "
                     "the declared symbol values are numerically dependent");
}

inline bool less(const SymScalar& a, const SymScalar& b) { return sign(b - a) == Sign::pos; }
inline bool positive(const SymScalar& a) { return sign(a) == Sign::pos; }

inline double to_double(const SymScalar& a) {
  Enclosure e = enclose(a, 24);
  return ((e.lo + e.hi) / 2).convert_to<double>();
}

/// Exact rational r with a == r*b, if one exists (b nonzero).
inline std::optional<Rational> ratio(const SymScalar& a, const SymScalar& b) {
  if (b.is_zero()) throw PreconditionError("ratio by zero scalar");
  if (a.is_zero()) return Rational(0);
  const auto& [i0, c0] = *b.terms().begin();
  Rational r = a.coeff(i0) / c0;
  if (r * b == a) return r;
  return std::nullopt;
}

namespace detail {

/// Rank of a dense rational matrix by Gaussian elimination.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<Rational>> coefficient_rows(std::span<const SymScalar> vals,
                                                           std::size_t width) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(vals.size());
  for (const auto& v : vals) {
    std::vector<Rational> row(width);
    for (const auto& [i, c] : v.terms()) row.at(i) = c;
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::size_t table_width(std::span<const SymScalar> vals) {
  std::size_t w = 1;
  for (const auto& v : vals) {
    if (v.table()) w = std::max(w, v.table()->size());
    for (const auto& t : v.terms()) w = std::max(w, t.first + 1);
  }
  return w;
}

}  // namespace detail

/// Dimension of the Q-span of the values.
inline std::size_t q_rank(std::span<const SymScalar> vals) {
  if (vals.empty()) return 0;
  for (std::size_t i = 1; i < vals.size(); ++i) SymScalar::common_table(vals[0], vals[i]);
  return detail::rational_rank(detail::coefficient_rows(vals, detail::table_width(vals)));
}

inline std::size_t q_rank(const std::vector<SymScalar>& vals) {
  return q_rank(std::span<const SymScalar>(vals));
}

/// Z-lattice generated by finitely many scalars, kept as an integer echelon
/// basis over a common denominator. Supports exact membership queries.
class PeriodLattice {
 public:
  explicit PeriodLattice(std::span<const SymScalar> generators) : gens_(generators.begin(), generators.end()) {
    width_ = detail::table_width(generators);
  }
  explicit PeriodLattice(const std::vector<SymScalar>& generators)
      : PeriodLattice(std::span<const SymScalar>(generators)) {}

  /// True iff v = sum n_i g_i for integers n_i.
  bool contains(const SymScalar& v) const {
    std::vector<SymScalar> all = gens_;
    all.push_back(v);
    std::size_t width = std::max(width_, detail::table_width(std::span<const SymScalar>(&v, 1)));
    Integer den = 1;
    for (const auto& s : all)
      for (const auto& [i, c] : s.terms()) den = boost::multiprecision::lcm(den, denominator(c));
    auto to_int = [&](const SymScalar& s) {
      std::vector<Integer> out(width, 0);
      for (const auto& [i, c] : s.terms()) out.at(i) = Integer(numerator(c) * (den / denominator(c)));
      return out;
    };
    std::vector<std::vector<Integer>> vecs;
    for (const auto& g : gens_) {
      auto iv = to_int(g);
      if (std::any_of(iv.begin(), iv.end(), [](const Integer& x) { return x != 0; })) vecs.push_back(std::move(iv));
    }
    auto basis = echelon(std::move(vecs), width);
    auto b = to_int(v);
    std::size_t next = 0;
    for (std::size_t r = 0; r < width; ++r) {
      if (next < basis.size() && basis[next].first == r) {
        const auto& p = basis[next].second;
        if (b[r] % p[r] != 0) return false;
        Integer q = b[r] / p[r];
        for (std::size_t k = r; k < width; ++k) b[k] -= q * p[k];
        ++next;
      } else if (b[r] != 0) {
        return false;
      }
    }
    return true;
  }

 private:
  // Unimodular column reduction: returns (pivot row, vector) pairs with
  // strictly increasing pivot rows and zeros above each pivot.
  static std::vector<std::pair<std::size_t, std::vector<Integer>>> echelon(
      std::vector<std::vector<Integer>> vecs, std::size_t width) {
    std::vector<std::pair<std::size_t, std::vector<Integer>>> basis;
    for (std::size_t r = 0; r < width && !vecs.empty(); ++r) {
      std::optional<std::size_t> piv;
      for (std::size_t j = 0; j < vecs.size(); ++j) {
        if (vecs[j][r] == 0) continue;
        if (!piv) {
          piv = j;
          continue;
        }
        auto& p = vecs[*piv];
        auto& v = vecs[j];
        auto [g, x, y] = egcd(p[r], v[r]);
        Integer pa = p[r] / g, va = v[r] / g;
        std::vector<Integer> np(width), nv(width);
        for (std::size_t k = 0; k < width; ++k) {
          np[k] = x * p[k] + y * v[k];
          nv[k] = va * p[k] - pa * v[k];
        }
        p = std::move(np);
        v = std::move(nv);
      }
      if (piv) {
        basis.emplace_back(r, std::move(vecs[*piv]));
        vecs.erase(vecs.begin() + static_cast<std::ptrdiff_t>(*piv));
      }
      std::erase_if(vecs, [](const std::vector<Integer>& v) {
        return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
      });
    }
    return basis;
  }

  // g = gcd(a,b) > 0 with x*a + y*b = g.
  static std::tuple<Integer, Integer, Integer> egcd(Integer a, Integer b) {
    Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
      Integer q = detail::floor_div(a, b);
      Integer t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
      t = y0 - q * y1;
      y0 = y1;
      y1 = t;
    }
    if (a < 0) return {Integer(-a), Integer(-x0), Integer(-y0)};
    return {a, x0, y0};
  }

  std::vector<SymScalar> gens_;
  std::size_t width_ = 1;
};

/// Renders "3/2 + 1*p + -2*q": rational part first (omitted when zero and
/// other terms exist), then symbol terms in table order.
inline std::string render(const SymScalar& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [i, c] : a.terms()) {
    std::string term = i == 0 ? to_string(c) : to_string(c) + "*" + a.table()->symbol(i).name;
    out += out.empty() ? term : " + " + term;
  }
  return out;
}

/// Parses a linear combination such as "3/2 + 1*alpha - q/2" or "2*p".
/// Unknown symbol names raise ScenarioError.
inline SymScalar parse_expression(std::string_view text, const TablePtr& table) {
  auto s = detail::trim(text);
  if (s.empty()) throw ScenarioError("empty expression");
  SymScalar acc(table);
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    int sgn = 1;
    bool had_op = false;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-' || std::isspace(static_cast<unsigned char>(s[pos])))) {
      if (s[pos] == '-') sgn = -sgn;
      if (s[pos] == '+' || s[pos] == '-') had_op = true;
      ++pos;
    }
    if (!first && !had_op) throw ScenarioError("expected '+' or '-' in expression '" + std::string(s) + "'");
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && !(s[end] == '-' && end > pos)) ++end;
    auto term = detail::trim(s.substr(pos, end - pos));
    if (term.empty()) throw ScenarioError("dangling operator in expression '" + std::string(s) + "'");
    Rational coef = sgn;
    std::string_view name;
    if (auto star = term.find('*'); star != std::string_view::npos) {
      auto c = try_parse_rational(term.substr(0, star));
      if (!c) throw ScenarioError("bad coefficient in '" + std::string(term) + "'");
      coef *= *c;
      name = detail::trim(term.substr(star + 1));
    } else if (auto c = try_parse_rational(term)) {
      coef *= *c;
    } else if (auto slash = term.find('/'); slash != std::string_view::npos) {
      auto d = try_parse_rational(term.substr(slash + 1));
      if (!d || *d == 0) throw ScenarioError("bad divisor in '" + std::string(term) + "'");
      coef /= *d;
      name = detail::trim(term.substr(0, slash));
    } else {
      name = term;
    }
    if (name.empty()) {
      acc += SymScalar(table, coef);
    } else {
      auto idx = table->index_of(name);
      if (!idx) throw ScenarioError("unresolved symbol '" + std::string(name) + "'");
      acc += SymScalar::symbol(table, *idx, coef);
    }
    pos = end;
    first = false;
  }
  return acc;
}

}  // namespace foliage
