// Alexander polynomials from Wirtinger presentations, and a skein oracle for the Conway polynomial.
// All polynomial arithmetic is exact over int64; numbers only appear in evaluate_nabla.
#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "engine.hpp"

namespace nss3m {

/// Integer Laurent polynomial in a fixed number of variables t1..tm.
struct LaurentPoly {
  using Exponent = std::vector<int>;
  std::size_t nvars = 0;
  std::map<Exponent, std::int64_t> terms;  // never holds zero coefficients

  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t n) : nvars(n) {}

  static LaurentPoly constant(std::size_t n, std::int64_t c) {
    LaurentPoly p(n);
    if (c != 0) p.terms[Exponent(n, 0)] = c;
    return p;
  }
  static LaurentPoly monomial(std::size_t n, Exponent e, std::int64_t c = 1) {
    LaurentPoly p(n);
    if (c != 0) p.terms[std::move(e)] = c;
    return p;
  }
  static LaurentPoly var(std::size_t n, std::size_t k, int power = 1) {
    Exponent e(n, 0);
    e[k] = power;
    return monomial(n, e);
  }

  bool is_zero() const { return terms.empty(); }
  void add_term(const Exponent& e, std::int64_t c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else if ((it->second += c) == 0) {
      terms.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.terms) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const {
    LaurentPoly p(nvars);
    for (const auto& [e, c] : terms) p.terms[e] = -c;
    return p;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly p(a.nvars);
    Exponent e(a.nvars);
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        for (std::size_t k = 0; k < a.nvars; ++k) e[k] = ea[k] + eb[k];
        p.add_term(e, ca * cb);
      }
    return p;
  }
  friend LaurentPoly operator*(std::int64_t s, const LaurentPoly& a) {
    LaurentPoly p(a.nvars);
    if (s == 0) return p;
    for (const auto& [e, c] : a.terms) p.terms[e] = s * c;
    return p;
  }
  bool operator==(const LaurentPoly& o) const { return nvars == o.nvars && terms == o.terms; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  /// t_k -> t_k^{-1} in every variable.
  LaurentPoly inverted() const {
    LaurentPoly p(nvars);
    for (const auto& [e0, c] : terms) {
      Exponent e = e0;
      for (auto& x : e) x = -x;
      p.terms[e] = c;
    }
    return p;
  }
  /// t_k -> t_k^s in every variable.
  LaurentPoly powered(int s) const {
    LaurentPoly p(nvars);
    for (const auto& [e0, c] : terms) {
      Exponent e = e0;
      for (auto& x : e) x *= s;
      p.add_term(e, c);
    }
    return p;
  }
  LaurentPoly shifted(const Exponent& by) const {
    LaurentPoly p(nvars);
    for (const auto& [e0, c] : terms) {
      Exponent e = e0;
      for (std::size_t k = 0; k < nvars; ++k) e[k] += by[k];
      p.terms[e] = c;
    }
    return p;
  }
  /// All variables set to one variable t.
  LaurentPoly diagonal() const {
    LaurentPoly p(1);
    for (const auto& [e, c] : terms) {
      int s = 0;
      for (int x : e) s += x;
      p.add_term({s}, c);
    }
    return p;
  }
  std::int64_t coefficient_sum() const {
    std::int64_t s = 0;
    for (const auto& [e, c] : terms) s += c;
    return s;
  }
  std::pair<int, int> degree_span(std::size_t k) const {
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [e, c] : terms) {
      if (first) lo = hi = e[k], first = false;
      lo = std::min(lo, e[k]);
      hi = std::max(hi, e[k]);
    }
    return {lo, hi};
  }

  Scalar evaluate(const std::vector<Scalar>& t) const {
    if (t.size() != nvars) throw Error("LaurentPoly::evaluate: expected " + std::to_string(nvars) + " points");
    Scalar s = 0;
    for (const auto& [e, c] : terms) {
      Scalar m = double(c);
      for (std::size_t k = 0; k < nvars; ++k) m *= std::pow(t[k], e[k]);
      s += m;
    }
    return s;
  }

  /// Canonical text: monomials in decreasing exponent order.
  std::string to_string(const std::string& stem = "t") const {
    if (terms.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      const auto& [e, c] = *it;
      std::int64_t a = c < 0 ? -c : c;
      if (first) {
        if (c < 0) o << "-";
      } else {
        o << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
      if (a != 1 || unit) o << a;
      bool need_star = a != 1;
      for (std::size_t k = 0; k < nvars; ++k) {
        if (e[k] == 0) continue;
        if (need_star) o << "*";
        need_star = true;
        o << stem;
        if (nvars > 1 || stem == "t") o << (k + 1);
        if (e[k] != 1) o << "^" << e[k];
      }
    }
    return o.str();
  }
};

/// Exact quotient p / (t_k - 1); throws if the division leaves a remainder.
inline LaurentPoly divide_by_t_minus_one(const LaurentPoly& p, std::size_t k) {
  if (p.is_zero()) return p;
  std::map<int, LaurentPoly> slices;  // coefficient of t_k^e, t_k slot zeroed
  for (const auto& [e0, c] : p.terms) {
    LaurentPoly::Exponent e = e0;
    int d = e[k];
    e[k] = 0;
    auto it = slices.try_emplace(d, LaurentPoly(p.nvars)).first;
    it->second.add_term(e, c);
  }
  // p_e = q_{e-1} - q_e, solved from the top degree down
  LaurentPoly q(p.nvars), carry(p.nvars);
  const int lo = slices.begin()->first, hi = slices.rbegin()->first;
  for (int e = hi; e > lo; --e) {
    auto it = slices.find(e);
    if (it != slices.end()) carry += it->second;
    for (const auto& [x0, c] : carry.terms) {
      LaurentPoly::Exponent x = x0;
      x[k] = e - 1;
      q.add_term(x, c);
    }
  }
  LaurentPoly rest = slices.begin()->second + carry;
  if (!rest.is_zero()) throw Error("fox_alexander: minor not divisible by (t" + std::to_string(k + 1) + " - 1)");
  return q;
}

/// One-variable polynomial in z with nonnegative exponents; coefficient of z^k at index k.
struct ZPoly {
  std::vector<std::int64_t> c;
  static ZPoly constant(std::int64_t v) { return ZPoly{{v}}.trimmed(); }
  ZPoly trimmed() const {
    ZPoly p = *this;
    while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
    return p;
  }
  bool is_zero() const { return trimmed().c.empty(); }
  friend ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    ZPoly p;
    p.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) p.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) p.c[i] += b.c[i];
    return p.trimmed();
  }
  friend ZPoly operator-(const ZPoly& a, const ZPoly& b) {
    ZPoly nb = b;
    for (auto& x : nb.c) x = -x;
    return a + nb;
  }
  ZPoly times_z() const {
    ZPoly p = trimmed();
    if (!p.c.empty()) p.c.insert(p.c.begin(), 0);
    return p;
  }
  bool operator==(const ZPoly& o) const { return trimmed().c == o.trimmed().c; }
  /// Substitution z = t - 1/t as a one-variable Laurent polynomial.
  LaurentPoly in_t() const {
    LaurentPoly zt = LaurentPoly::var(1, 0, 1) - LaurentPoly::var(1, 0, -1);
    LaurentPoly acc(1), power = LaurentPoly::constant(1, 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      acc += c[k] * power;
      power = power * zt;
    }
    return acc;
  }
  std::string to_string() const {
    ZPoly p = trimmed();
    if (p.c.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (std::size_t k = p.c.size(); k-- > 0;) {
      std::int64_t v = p.c[k];
      if (v == 0) continue;
      std::int64_t a = v < 0 ? -v : v;
      o << (first ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
      first = false;
      if (a != 1 || k == 0) o << a;
      if (k > 0) o << (a != 1 ? "*" : "") << "z" << (k > 1 ? "^" + std::to_string(k) : "");
    }
    return o.str();
  }
};

/// Planar-diagram view of a link: oriented edges between crossings.
struct PlanarDiagram {
  struct Crossing {
    int in_over, out_over, in_under, out_under;
    int sign;
  };
  std::vector<Crossing> crossings;
  int edge_count = 0;
  std::vector<int> edge_component;     // component index per edge
  std::size_t component_count = 0;
  std::size_t free_loops = 0;          // crossing-less components (each counted once)
  std::vector<std::size_t> free_loop_component;
};

inline PlanarDiagram planar_diagram(const SlicedDiagram& d) {
  for (const auto& e : d.slices)
    if (e.kind == EventKind::Coupon) throw DiagramError("alexander: diagram has coupons");
  Wiring w = analyze(d);
  if (!w.ok()) throw DiagramError("alexander: " + w.defects.front());
  PlanarDiagram pd;
  pd.edge_count = int(w.edge_count);
  pd.component_count = w.component_count();
  pd.edge_component.assign(w.edge_count, 0);
  for (std::size_t e = 0; e < w.edge_count; ++e) pd.edge_component[e] = int(w.edge_component[e]);
  for (const auto& x : w.crossings)
    pd.crossings.push_back({x.edge_in_over, x.edge_out_over, x.edge_in_under, x.edge_out_under, x.sign});
  pd.free_loops = w.edge_free_loops.size();
  for (int e : w.edge_free_loops) pd.free_loop_component.push_back(w.edge_component[std::size_t(e)]);
  return pd;
}

/// Relator x_b = x_o^eps x_a x_o^-eps, stored as generator indices.
struct WirtingerRelator {
  std::size_t over, in, out;
  int eps;
  /// Word form of x_o^eps x_a x_o^-eps x_b^-1 as signed 1-based generator indices.
  std::vector<int> word() const {
    int o = int(over) + 1, a = int(in) + 1, b = int(out) + 1;
    return {eps * o, a, -eps * o, -b};
  }
};

struct WirtingerPresentation {
  std::size_t generators = 0;
  std::vector<WirtingerRelator> relators;
  std::vector<std::size_t> component;  // generator -> link component
  std::size_t component_count = 0;
};

inline WirtingerPresentation wirtinger(const PlanarDiagram& pd) {
  detail::UnionFind arcs;
  for (int e = 0; e < pd.edge_count; ++e) arcs.make();
  for (const auto& x : pd.crossings) arcs.unite(std::size_t(x.in_over), std::size_t(x.out_over));
  std::map<std::size_t, std::size_t> gen_of_root;
  WirtingerPresentation p;
  p.component_count = pd.component_count;
  std::vector<std::size_t> gen(std::size_t(pd.edge_count));
  for (int e = 0; e < pd.edge_count; ++e) {
    std::size_t rt = arcs.find(std::size_t(e));
    auto [it, fresh] = gen_of_root.try_emplace(rt, p.generators);
    if (fresh) {
      ++p.generators;
      p.component.push_back(std::size_t(pd.edge_component[std::size_t(e)]));
    }
    gen[std::size_t(e)] = it->second;
  }
  for (const auto& x : pd.crossings)
    p.relators.push_back({gen[std::size_t(x.in_over)], gen[std::size_t(x.in_under)], gen[std::size_t(x.out_under)], x.sign});
  return p;
}

inline WirtingerPresentation wirtinger(const SlicedDiagram& d) { return wirtinger(planar_diagram(d)); }

namespace detail {
/// Determinant by dynamic programming over column subsets; exact, no division.
inline LaurentPoly subset_determinant(const std::vector<std::vector<LaurentPoly>>& a, std::size_t nvars) {
  const std::size_t n = a.size();
  if (n == 0) return LaurentPoly::constant(nvars, 1);
  if (n > 20) throw Error("fox_alexander: presentation too large");
  std::vector<LaurentPoly> dp(std::size_t(1) << n, LaurentPoly(nvars));
  dp[0] = LaurentPoly::constant(nvars, 1);
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask].is_zero()) continue;
    const std::size_t row = std::size_t(std::popcount(mask));
    if (row == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (std::size_t(1) << j) || a[row][j].is_zero()) continue;
      const int above = std::popcount(mask >> (j + 1));
      LaurentPoly term = dp[mask] * a[row][j];
      if (above % 2) dp[mask | (std::size_t(1) << j)] -= term;
      else dp[mask | (std::size_t(1) << j)] += term;
    }
  }
  return dp.back();
}
}  // namespace detail

/// Abelianized Fox Jacobian, rows = relators, columns = generators.
inline std::vector<std::vector<LaurentPoly>> fox_matrix(const WirtingerPresentation& p) {
  const std::size_t m = p.component_count;
  std::vector<std::vector<LaurentPoly>> a(p.relators.size(), std::vector<LaurentPoly>(p.generators, LaurentPoly(m)));
  auto t = [&](std::size_t g, int power) { return LaurentPoly::var(m, p.component[g], power); };
  const LaurentPoly one = LaurentPoly::constant(m, 1);
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    const auto& r = p.relators[i];
    if (r.eps > 0) {
      a[i][r.over] += one - t(r.in, 1);
      a[i][r.in] += t(r.over, 1);
    } else {
      a[i][r.over] += t(r.over, -1) * (t(r.in, 1) - one);
      a[i][r.in] += t(r.over, -1);
    }
    a[i][r.out] -= one;
  }
  return a;
}

/// Multivariable Alexander polynomial up to a signed monomial. Split presentations give 0.
inline LaurentPoly fox_alexander(const WirtingerPresentation& p) {
  const std::size_t m = p.component_count;
  if (m == 0) throw Error("fox_alexander: empty link");
  if (p.relators.empty()) return p.generators == 1 ? LaurentPoly::constant(m, 1) : LaurentPoly(m);
  // A disconnected diagram is split. In a connected one every component that is never
  // an under-strand adds a generator, and such a component lies above the rest: split again.
  std::vector<std::size_t> up(p.generators);
  std::iota(up.begin(), up.end(), 0);
  auto find = [&](std::size_t x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  };
  for (const auto& r : p.relators) {
    up[find(r.in)] = find(r.over);
    up[find(r.out)] = find(r.over);
  }
  for (std::size_t g = 0; g < p.generators; ++g)
    if (find(g) != find(0)) return LaurentPoly(m);
  if (p.generators > p.relators.size()) return LaurentPoly(m);
  if (p.generators != p.relators.size()) throw Error("fox_alexander: degenerate presentation");
  auto a = fox_matrix(p);
  // delete the last relator and the column of a generator
  const std::size_t drop = p.generators - 1;
  std::vector<std::vector<LaurentPoly>> minor;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    std::vector<LaurentPoly> row;
    for (std::size_t j = 0; j < p.generators; ++j)
      if (j != drop) row.push_back(a[i][j]);
    minor.push_back(std::move(row));
  }
  LaurentPoly det = detail::subset_determinant(minor, m);
  if (m >= 2) det = divide_by_t_minus_one(det, p.component[drop]);
  return det;
}

inline LaurentPoly fox_alexander(const SlicedDiagram& d) { return fox_alexander(wirtinger(d)); }

/// Conway polynomial by skein resolution of a descending diagram.
inline ZPoly conway_skein(const PlanarDiagram& start, std::size_t budget = 12) {
  if (start.crossings.size() > budget)
    throw Error("conway_skein: " + std::to_string(start.crossings.size()) + " crossings exceeds budget " +
                std::to_string(budget));
  struct State {
    std::vector<PlanarDiagram::Crossing> x;
    std::size_t loops;
  };
  std::map<std::string, ZPoly> memo;

  auto code = [](const State& s) {
    std::ostringstream o;
    o << s.loops << ":";
    for (const auto& c : s.x) o << c.in_over << "," << c.out_over << "," << c.in_under << "," << c.out_under << ","
                                << c.sign << ";";
    return o.str();
  };

  std::function<ZPoly(const State&)> rec = [&](const State& s) -> ZPoly {
    const std::string key = code(s);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    // head crossing of each edge, and which role it enters as
    std::map<int, std::pair<std::size_t, bool>> head;  // edge -> (crossing, enters as over)
    std::set<int> edges;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      head[s.x[i].in_over] = {i, true};
      head[s.x[i].in_under] = {i, false};
      for (int e : {s.x[i].in_over, s.x[i].out_over, s.x[i].in_under, s.x[i].out_under}) edges.insert(e);
    }
    // traverse components from their smallest edge; find the first crossing met first from below
    std::set<int> seen_edge;
    std::vector<int> first_visit(s.x.size(), 0);  // +1 over first, -1 under first
    std::size_t components = s.loops;
    std::optional<std::size_t> bad;
    for (int e0 : edges) {
      if (seen_edge.count(e0)) continue;
      ++components;
      int e = e0;
      while (!seen_edge.count(e)) {
        seen_edge.insert(e);
        auto [i, over] = head.at(e);
        if (first_visit[i] == 0) {
          first_visit[i] = over ? 1 : -1;
          if (!over && !bad) bad = i;
        }
        e = over ? s.x[i].out_over : s.x[i].out_under;
      }
    }
    ZPoly result;
    if (!bad) {
      result = components == 1 ? ZPoly::constant(1) : ZPoly{};
    } else {
      const auto& c = s.x[*bad];
      State switched = s;
      auto& sc = switched.x[*bad];
      sc = {c.in_under, c.out_under, c.in_over, c.out_over, -c.sign};
      // oriented smoothing: in_over continues to out_under, in_under to out_over
      State smooth{{}, s.loops};
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (i != *bad) smooth.x.push_back(s.x[i]);
      auto join = [&](int from, int to) {
        if (from == to) {
          ++smooth.loops;
          return;
        }
        for (auto& y : smooth.x)
          for (int* f : {&y.in_over, &y.out_over, &y.in_under, &y.out_under})
            if (*f == to) *f = from;
      };
      join(c.in_over, c.out_under);
      // the second pair may have been renamed by the first join
      int a = c.in_under == c.out_under ? c.in_over : c.in_under;
      int b = c.out_over == c.out_under ? c.in_over : c.out_over;
      join(a, b);
      ZPoly other = rec(switched), zero = rec(smooth).times_z();
      // L+ = L- + z L0
      result = c.sign > 0 ? other + zero : other - zero;
    }
    memo.emplace(key, result);
    return result;
  };

  State s{start.crossings, start.free_loops};
  return rec(s);
}

inline ZPoly conway_skein(const SlicedDiagram& d, std::size_t budget = 12) {
  return conway_skein(planar_diagram(d), budget);
}

/// Conway function: numerator, plus a tracked divisor (t - 1/t) for knots.
struct ConwayFunction {
  LaurentPoly numerator;
  bool divisor = false;
  bool anchored = false;  // sign fixed against the skein oracle
  std::size_t components() const { return numerator.nvars; }

  std::string to_string() const {
    std::string n = numerator.to_string();
    if (!divisor) return n;
    return "(" + n + ")/(t1 - t1^-1)";
  }
};

/// Fixes the unit of a Fox-calculus polynomial: t -> t^2, recenter for the inversion symmetry,
/// then anchor the sign on the one-variable specialization against a Conway polynomial.
inline ConwayFunction normalize_conway(const LaurentPoly& p, std::size_t m, const ZPoly& anchor) {
  if (p.nvars != m) throw Error("normalize_conway: variable count mismatch");
  ConwayFunction f;
  f.divisor = m == 1;
  if (p.is_zero()) {
    f.numerator = p;
    f.anchored = anchor.is_zero();
    if (!f.anchored) throw DefectError("normalize_conway: Fox polynomial vanishes but the skein oracle does not");
    return f;
  }
  LaurentPoly q = p.powered(2);
  LaurentPoly::Exponent shift(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto [lo, hi] = q.degree_span(k);
    shift[k] = -(lo + hi) / 2;
  }
  q = q.shifted(shift);
  // numerator symmetry: knots carry an antisymmetric divisor
  const int want = m == 1 ? 1 : ((m % 2) ? -1 : 1);
  LaurentPoly inv = q.inverted();
  if (inv != (want > 0 ? q : -q)) throw DefectError("normalize_conway: inversion symmetry cannot be achieved");
  // one-variable specialization times (t - 1/t) must equal the Conway polynomial at z = t - 1/t
  LaurentPoly lhs = m == 1 ? q : q.diagonal() * (LaurentPoly::var(1, 0, 1) - LaurentPoly::var(1, 0, -1));
  LaurentPoly rhs = anchor.in_t();
  if (lhs == rhs) {
    f.anchored = true;
  } else if (lhs == -rhs) {
    q = -q;
    f.anchored = true;
  } else if (!rhs.is_zero()) {
    throw DefectError("normalize_conway: specialization does not match the skein oracle");
  }
  f.numerator = q;
  return f;
}

/// Full pipeline on a link diagram.
inline ConwayFunction conway_function(const SlicedDiagram& d) {
  PlanarDiagram pd = planar_diagram(d);
  LaurentPoly p = fox_alexander(wirtinger(pd));
  return normalize_conway(p, pd.component_count, conway_skein(pd, std::max<std::size_t>(12, pd.crossings.size())));
}

/// Inversion-symmetry residual of a normalized Conway function (zero when exact).
inline std::size_t symmetry_defect(const ConwayFunction& f) {
  const std::size_t m = f.components();
  const bool odd = f.divisor ? false : (m % 2 == 1);
  LaurentPoly diff = f.numerator.inverted() - (odd ? -f.numerator : f.numerator);
  return diff.terms.size();
}

inline Scalar evaluate_nabla(const ConwayFunction& f, const std::vector<Scalar>& points, double tol = 1e-12) {
  Scalar v = f.numerator.evaluate(points);
  if (f.divisor) {
    Scalar den = points[0] - 1.0 / points[0];
    if (std::abs(den) < tol) throw Error("evaluate_nabla: pole of the divisor (t - 1/t)");
    v /= den;
  }
  return v;
}

}  // namespace nss3m
