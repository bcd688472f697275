// Closed forms at r = 2 and the Clebsch-Gordan vertex machinery for trivalent graphs.
#pragma once

#include <numeric>

#include "alexander.hpp"
#include "surgery.hpp"

namespace nss3m {

/// i^x = exp(i pi x / 2) on the principal branch used throughout.
inline Scalar ipow(Scalar x) { return std::exp(kI * kPi * x / 2.0); }

/// Color parameter of each component in wiring order; components must be typically colored.
inline std::vector<Scalar> component_alphas(const Wiring& w) {
  std::vector<Scalar> out;
  for (std::size_t c = 0; c < w.component_count(); ++c) {
    auto arc = first_arc(w, c);
    if (!arc) throw DiagramError("component @" + w.component_names[c] + " has no typical arc");
    out.push_back(w.words[arc->level][arc->pos].color.alpha);
  }
  return out;
}

namespace detail {
inline void require_r2(const RootData& rd, const char* what) {
  if (rd.r != 2) throw Error(std::string(what) + " is only defined at r=2");
}

/// sum over ordered pairs (j,h) of f(j,h) * lk(L_j, L_h), framings on the diagonal
template <class F>
Scalar linking_sum(const std::vector<std::vector<int>>& lk, F f) {
  Scalar s = 0;
  for (std::size_t j = 0; j < lk.size(); ++j)
    for (std::size_t h = 0; h < lk.size(); ++h)
      if (lk[j][h] != 0) s += f(j, h) * double(lk[j][h]);
  return s;
}
}  // namespace detail

/// Right-hand side of the F' / Conway-function relation at r = 2, colors read off the diagram.
inline Scalar fprime_predicted(const SlicedDiagram& d) {
  ConwayFunction nab = conway_function(d);
  Wiring w = analyze(d);
  auto al = component_alphas(w);
  std::vector<Scalar> pts;
  for (auto a : al) pts.push_back(ipow(1.0 - a));
  const auto lk = w.linking_matrix();
  Scalar e = detail::linking_sum(lk, [&](std::size_t j, std::size_t h) { return (al[j] * al[h] - 1.0) / 2.0; });
  return -2.0 * kI * evaluate_nabla(nab, pts) * ipow(e);
}

/// Engine side: modified evaluation cut at the first typical arc.
inline Scalar fprime_engine(const Engine& eng, const SlicedDiagram& d) {
  Wiring w = analyze(d);
  if (!w.ok()) throw DiagramError(w.defects.front());
  std::optional<ArcRef> arc;
  for (std::size_t c = 0; c < w.component_count() && !arc; ++c) arc = first_arc(w, c);
  if (!arc) throw DiagramError("no typical arc to cut");
  return eng.modified_eval(d, *arc);
}

namespace detail {
struct SurgeryLink {
  SlicedDiagram link;
  std::vector<Scalar> alpha;  // per wiring component
  Wiring wiring;
  LinkingData ld;
};

/// Checks T is empty and the triple is computable at r = 2; orders omega by wiring component.
inline SurgeryLink surgery_link(const SurgeryTriple& s) {
  RootData rd(2);
  TripleAnalysis ta = analyze_triple(rd, s);
  if (!ta.wiring.ok()) throw DiagramError(ta.wiring.defects.front());
  if (!ta.defects.empty()) throw NonComputableError(ta.defects.front());
  if (!ta.noncomputable.empty()) throw NonComputableError("not computable: " + ta.noncomputable.front());
  if (!ta.t_comp.empty()) throw Error("closed form needs an empty graph T");
  SurgeryLink out;
  out.link = s.diagram;
  out.wiring = ta.wiring;
  out.ld = ta.link;
  out.alpha.assign(ta.wiring.component_count(), 0.0);
  for (std::size_t i = 0; i < s.surgery.size(); ++i) out.alpha[ta.wiring.component_index(s.surgery[i])] = s.omega[i];
  for (auto a : out.alpha)
    if (std::abs(a.imag()) < 1e-12 && std::abs(a.real() - std::round(a.real())) < 1e-9)
      throw NonComputableError("non-generic degree " + format_scalar(a, 6));
  return out;
}

inline Scalar nabla_at(const SurgeryLink& sl) {
  std::vector<Scalar> pts;
  for (auto a : sl.alpha) pts.push_back(ipow(a));
  return evaluate_nabla(conway_function(sl.link), pts);
}
}  // namespace detail

/// Closed form for N_2(M, empty, omega) from the Conway function of the surgery link.
inline Scalar n2_closed_form(const SurgeryTriple& s) {
  auto sl = detail::surgery_link(s);
  const int m = int(sl.alpha.size());
  const int sp = sl.ld.sigma_plus, sm = sl.ld.sigma_minus;
  Scalar v = 2.0 * std::pow(4.0, double(m - sp - sm)) * ipow(double(sm - sp - m - 1));
  for (auto a : sl.alpha) v /= ipow(a) - ipow(-a);
  v *= detail::nabla_at(sl);
  const auto lk = sl.wiring.linking_matrix();
  v *= ipow(detail::linking_sum(lk, [&](std::size_t j, std::size_t h) { return sl.alpha[j] * (sl.alpha[h] + 2.0) / 2.0; }));
  return v;
}

/// Torsion of the surgered manifold twisted by omega, charges supplied by the caller.
inline Scalar torsion_surgery(const SurgeryTriple& s, const std::vector<long>& charges) {
  auto sl = detail::surgery_link(s);
  const std::size_t m = sl.alpha.size();
  if (charges.size() != m) throw Error("torsion: expected " + std::to_string(m) + " charges");
  // charges are given in the order of s.surgery
  std::vector<long> k(m);
  for (std::size_t i = 0; i < m; ++i) k[sl.wiring.component_index(s.surgery[i])] = charges[i];
  Scalar v = (2 * int(m) - sl.ld.sigma_plus) % 2 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < m; ++j) v *= ipow(sl.alpha[j] * double(k[j] - 1)) / (ipow(sl.alpha[j]) - ipow(-sl.alpha[j]));
  return v * detail::nabla_at(sl);
}

inline int first_betti(const SurgeryTriple& s) { return analyze_triple(RootData(2), s).link.nullity(); }

// ---- lens spaces ----

struct LensSpec {
  long p = 0, q = 0;
  std::vector<long> chain;  // p/q = a1 - 1/(a2 - ...)
};

inline std::vector<long> negative_continued_fraction(long p, long q) {
  std::vector<long> a;
  while (q != 0) {
    long c = (p + q - 1) / q;  // ceiling for positive p, q
    a.push_back(c);
    long r = c * q - p;
    p = q;
    q = r;
  }
  return a;
}

inline LensSpec lens_spec(long p, long q) {
  if (!(p > q && q > 0)) throw Error("lens space needs p > q > 0");
  if (std::gcd(p, q) != 1) throw Error("lens space needs coprime p, q");
  return {p, q, negative_continued_fraction(p, q)};
}

struct LensPresentation {
  LensSpec spec;
  SurgeryTriple base;                       // omega empty
  std::vector<std::vector<Scalar>> omegas;  // admissible generic colorings
  long det = 0;
};

namespace detail {
inline long int_det(std::vector<std::vector<long>> a) {
  // Bareiss elimination, exact for small integer matrices
  const std::size_t n = a.size();
  long sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[s], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return n ? sign * a[n - 1][n - 1] : 1;
}

inline std::vector<std::vector<long>> adjugate(const std::vector<std::vector<long>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long>> adj(n, std::vector<long>(n, 1));
  if (n == 1) return adj;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<long>> mnr;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<long> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != j) row.push_back(a[r][c]);
        mnr.push_back(row);
      }
      adj[j][i] = ((i + j) % 2 ? -1 : 1) * int_det(mnr);
    }
  return adj;
}
}  // namespace detail

/// Degrees alpha with A alpha = 0 mod 2 for the linking matrix A, all non-integral, as alpha = 2x/|det|.
inline std::vector<std::vector<Scalar>> admissible_omegas(const std::vector<std::vector<long>>& a) {
  const std::size_t m = a.size();
  const long det = detail::int_det(a);
  if (det == 0) throw Error("admissible_omegas: degenerate linking matrix");
  const long D = std::abs(det), sg = det > 0 ? 1 : -1;
  auto adj = detail::adjugate(a);
  std::set<std::vector<long>> seen;
  std::vector<std::vector<Scalar>> out;
  std::vector<long> n(m, 0);
  while (true) {
    std::vector<long> x(m);
    for (std::size_t j = 0; j < m; ++j) {
      long s = 0;
      for (std::size_t h = 0; h < m; ++h) s += adj[j][h] * n[h];
      x[j] = ((sg * s) % D + D) % D;
    }
    bool generic = std::all_of(x.begin(), x.end(), [&](long v) { return (2 * v) % D != 0; });
    if (generic && seen.insert(x).second) {
      std::vector<Scalar> al;
      for (long v : x) al.push_back(2.0 * double(v) / double(D));
      out.push_back(al);
    }
    std::size_t k = 0;
    while (k < m && ++n[k] == D) n[k++] = 0;
    if (k == m) break;
  }
  return out;
}

inline LensPresentation lens_presentation(long p, long q) {
  LensPresentation lp;
  lp.spec = lens_spec(p, q);
  const auto& a = lp.spec.chain;
  std::vector<int> fr(a.begin(), a.end());
  std::vector<Color> cols(a.size(), Color::typical(0.5));
  lp.base.diagram = chain_link(fr, cols);
  for (std::size_t i = 0; i < a.size(); ++i) lp.base.surgery.push_back("L" + std::to_string(i + 1));
  std::vector<std::vector<long>> lk(a.size(), std::vector<long>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    lk[i][i] = a[i];
    if (i + 1 < a.size()) lk[i][i + 1] = lk[i + 1][i] = 1;
  }
  lp.det = detail::int_det(lk);
  lp.omegas = admissible_omegas(lk);
  return lp;
}

inline SurgeryTriple with_omega(SurgeryTriple s, std::vector<Scalar> omega) {
  s.omega = std::move(omega);
  return s;
}

/// Lens formula with exponent k^2 q / p (the form that matches the surgery computation).
inline Scalar lens_closed_form(long p, long q, long k) {
  if (k % p == 0) throw Error("lens_closed_form: k must not be divisible by p");
  const double kk = double(k);
  Scalar num = (k % 2 ? -1.0 : 1.0) * std::exp(kI * kPi * kk * kk * double(q) / double(p));
  return num / (2.0 * kI * std::sin(kPi * kk * double(q) / double(p)) * std::sin(kPi * kk / double(p)));
}

/// Same display with exponent k^2 p / q, kept as a diagnostic.
inline Scalar lens_closed_form_pq(long p, long q, long k) {
  if (k % p == 0) throw Error("lens_closed_form: k must not be divisible by p");
  const double kk = double(k);
  Scalar num = (k % 2 ? -1.0 : 1.0) * std::exp(kI * kPi * kk * kk * double(p) / double(q));
  return num / (2.0 * kI * std::sin(kPi * kk * double(q) / double(p)) * std::sin(kPi * kk / double(p)));
}

/// k in 1..p-1 whose closed form matches `value` to relative error `tol`.
inline std::vector<long> lens_matches(Scalar value, long p, long q, double tol = 1e-6, bool pq_form = false) {
  std::vector<long> ks;
  for (long k = 1; k < p; ++k) {
    Scalar c = pq_form ? lens_closed_form_pq(p, q, k) : lens_closed_form(p, q, k);
    if (std::abs(c - value) <= tol * std::abs(value)) ks.push_back(k);
  }
  return ks;
}

// ---- Clebsch-Gordan vertex ----

namespace detail {
inline bool odd_integer(Scalar x, double tol = 1e-9) {
  if (std::abs(x.imag()) > tol) return false;
  double r = x.real();
  return std::abs(r - std::round(r)) < tol && std::lround(r) % 2 != 0;
}

/// [a; b] with a - b a nonnegative integer
inline Scalar binom_complex(const RootData& rd, Scalar a, Scalar b) {
  Scalar n = a - b;
  long k = std::lround(n.real());
  if (std::abs(n - double(k)) > 1e-9) throw Error("q-binomial: a - b is not an integer");
  return rd.q_binom(a, int(k));
}

inline int admissible_sign(Scalar a, Scalar b, Scalar c, double tol = 1e-9) {
  for (Scalar x : {a, b, c})
    if (odd_integer(x)) throw DiagramError("inadmissible color " + format_scalar(x, 6) + ": odd integer");
  Scalar s = a + b + c;
  if (std::abs(s - 1.0) < tol) return 1;
  if (std::abs(s + 1.0) < tol) return -1;
  throw DiagramError("inadmissible color triple: sum " + format_scalar(s, 6) + " is not +1 or -1");
}

/// v_1 = s F v_0 in the basis of the coefficient display
inline Scalar cg_scale(const RootData& rd, Scalar a) { return ipow((a + 1.0) / 2.0) / rd.q_int(a + 1.0); }
}  // namespace detail

/// Coefficient C^{a,b,c}_{j,k,h}; zero off the support 2(j+k-h) = a+b+c+1.
inline Scalar cg_coefficient(Scalar al, Scalar be, Scalar ga, int j, int k, int h) {
  RootData rd(2);
  if (std::abs(double(2 * (j + k - h)) - (al + be + ga + 1.0)) > 1e-9) return 0.0;
  Scalar pre = ((k - h) % 2 ? -1.0 : 1.0) *
               ipow((be * double(k - 1) - al * double(j + 1) + double(2 * (k + h - j - 1) + j * j - k * k)) / 2.0) /
               detail::binom_complex(rd, 1.0 - ga, 1.0 - ga - double(h)) *
               detail::binom_complex(rd, 1.0 - ga, (al + be - ga + 1.0) / 2.0);
  Scalar sum = 0;
  for (int t = 0; t <= h; ++t) {
    const int s = h - t;
    Scalar term = (t % 2 ? -1.0 : 1.0) * ipow(double(2 * t - h) * (2.0 - ga - double(h)) / 2.0);
    term *= detail::binom_complex(rd, (al + be + ga + 1.0) / 2.0, (al + be + ga + 1.0) / 2.0 - double(j - t));
    term *= detail::binom_complex(rd, al - double(j - t - 1), al - double(j) + 1.0);
    term *= detail::binom_complex(rd, be - double(k - s - 1), be - double(k) + 1.0);
    sum += term;
  }
  return pre * sum;
}

/// Invariant vector in V_a (x) V_b (x) V_c, written in the standard module bases.
/// The display uses v_1 = s F v_0 on every factor; the third factor is read in reversed order.
inline DenseMap cg_vertex(Scalar al, Scalar be, Scalar ga) {
  RootData rd(2);
  detail::admissible_sign(al, be, ga);
  const Scalar sa = detail::cg_scale(rd, al), sb = detail::cg_scale(rd, be), sg = detail::cg_scale(rd, ga);
  Mat x = Mat::Zero(8, 1);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      for (int h = 0; h < 2; ++h) {
        Scalar c = cg_coefficient(al, be, ga, j, k, h);
        if (c == 0.0) continue;
        if (j) c *= sa;
        if (k) c *= sb;
        if (!h) c *= sg;
        x(j * 4 + k * 2 + (1 - h), 0) += c;
      }
  return DenseMap(x);
}

/// Isomorphism V_a -> (V_{-a})^* in standard bases (dual basis on the target).
inline DenseMap w_iso(Scalar al) {
  RootData rd(2);
  if (detail::odd_integer(al)) throw DiagramError("w_iso: color is an odd integer");
  Mat w = Mat::Zero(2, 2);
  for (int j = 0; j < 2; ++j) w(1 - j, j) = ipow(-((al + 1.0) / 2.0 - double(j)));
  // change from the scaled bases: source v_1 = s_a e_1, target dual of v_1 = s_{-a} e_1
  Mat ps = Mat::Identity(2, 2), pt = Mat::Identity(2, 2);
  ps(1, 1) = 1.0 / detail::cg_scale(rd, al);
  pt(1, 1) = 1.0 / detail::cg_scale(rd, -al);
  return DenseMap(pt * w * ps);
}

/// Residual of x . vertex = epsilon(x) vertex for x in {E, F, H}.
inline double cg_equivariance_residual(Scalar al, Scalar be, Scalar ga) {
  RootData rd(2);
  auto m = tensor_module(rd, tensor_module(rd, typical_module(rd, al), typical_module(rd, be)), typical_module(rd, ga));
  Mat x = cg_vertex(al, be, ga).m;
  double scale = std::max(1.0, x.norm());
  return std::max({(m.E * x).norm(), (m.F * x).norm(), (m.H * x).norm()}) / scale;
}

inline double w_iso_residual(Scalar al) {
  RootData rd(2);
  auto a = typical_module(rd, al);
  auto b = dual_module(rd, typical_module(rd, -al));
  Mat w = w_iso(al).m;
  double scale = std::max(1.0, w.norm());
  return std::max({(w * a.E - b.E * w).norm(), (w * a.F - b.F * w).norm(), (w * a.H - b.H * w).norm()}) / scale;
}

// ---- trivalent graphs ----

/// A trivalent graph laid out bottom to top. Each vertex consumes adjacent open edges (arriving from below)
/// and emits new edges upward; every vertex has degree three. An edge carries its color at the lower end
/// and -color at the upper end, the two ends joined by a w coupon.
struct TrivalentGraph {
  struct Vertex {
    std::size_t pos = 0;
    std::size_t consume = 0;
    std::vector<std::string> emit;
  };
  std::map<std::string, Scalar> color;
  std::vector<Vertex> vertices;
};

enum class WPlacement { AfterSource, BeforeTarget };

/// Vertex coupon: inputs are legs leaving downward, labeled (c,-); outputs are legs leaving upward.
/// Legs read cyclically as reversed inputs then outputs.
inline std::shared_ptr<const Coupon> vertex_coupon(const std::vector<Scalar>& in, const std::vector<Scalar>& out,
                                                   const std::string& name) {
  if (in.size() + out.size() != 3) throw DiagramError("vertex " + name + " is not trivalent");
  std::vector<Scalar> legs(in.rbegin(), in.rend());
  legs.insert(legs.end(), out.begin(), out.end());
  Mat c = cg_vertex(legs[0], legs[1], legs[2]).m;
  auto cp = std::make_shared<Coupon>();
  cp->name = name;
  for (auto a : in) cp->in.push_back(StrandLabel(Color::typical(a), -1));
  for (auto a : out) cp->out.push_back(StrandLabel(Color::typical(a), +1));
  const std::size_t ni = in.size(), no = out.size();
  cp->map = Mat::Zero(Eigen::Index(std::size_t(1) << no), Eigen::Index(std::size_t(1) << ni));
  for (std::size_t idx = 0; idx < 8; ++idx) {
    // idx is the leg index triple (l0, l1, l2) with the first leg most significant
    std::size_t l[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
    std::size_t col = 0, row = 0;
    for (std::size_t i = 0; i < ni; ++i) col = col * 2 + l[ni - 1 - i];
    for (std::size_t o = 0; o < no; ++o) row = row * 2 + l[ni + o];
    cp->map(Eigen::Index(row), Eigen::Index(col)) = c(Eigen::Index(idx), 0);
  }
  return cp;
}

inline std::shared_ptr<const Coupon> edge_coupon(Scalar c, const std::string& name) {
  auto cp = std::make_shared<Coupon>();
  cp->name = name;
  cp->map = w_iso(c).m;
  cp->in = {StrandLabel(Color::typical(c), +1)};
  cp->out = {StrandLabel(Color::typical(-c), -1)};
  return cp;
}

/// Ribbon graph T_Gamma: cg vertices, w on every edge.
inline SlicedDiagram t_gamma(const TrivalentGraph& g, WPlacement place = WPlacement::AfterSource) {
  SlicedDiagram d;
  d.root = 2;
  struct Open {
    std::string edge;
    bool converted;
  };
  std::vector<Open> word;
  std::set<std::string> used;
  auto color = [&](const std::string& e) {
    auto it = g.color.find(e);
    if (it == g.color.end()) throw DiagramError("edge " + e + " has no color");
    return it->second;
  };
  auto add_w = [&](std::size_t pos) {
    const std::string& e = word[pos].edge;
    d.slices.push_back(SliceEvent::make_coupon(pos, edge_coupon(color(e), "w:" + e), "G"));
    word[pos].converted = true;
  };
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto& vx = g.vertices[v];
    if (vx.pos + vx.consume > word.size()) throw DiagramError("vertex " + std::to_string(v) + " consumes missing edges");
    std::vector<Scalar> in, out;
    for (std::size_t i = 0; i < vx.consume; ++i) {
      if (!word[vx.pos + i].converted) add_w(vx.pos + i);
      in.push_back(-color(word[vx.pos + i].edge));
    }
    for (const auto& e : vx.emit) {
      if (!used.insert(e).second) throw DiagramError("edge " + e + " emitted twice");
      out.push_back(color(e));
    }
    d.slices.push_back(SliceEvent::make_coupon(vx.pos, vertex_coupon(in, out, "v" + std::to_string(v + 1)), "G"));
    word.erase(word.begin() + std::ptrdiff_t(vx.pos), word.begin() + std::ptrdiff_t(vx.pos + vx.consume));
    std::vector<Open> fresh;
    for (const auto& e : vx.emit) fresh.push_back({e, false});
    word.insert(word.begin() + std::ptrdiff_t(vx.pos), fresh.begin(), fresh.end());
    if (place == WPlacement::AfterSource)
      for (std::size_t i = 0; i < fresh.size(); ++i) add_w(vx.pos + i);
    else
      d.slices.push_back(SliceEvent::identity(0));
  }
  if (!word.empty()) throw DiagramError("graph has " + std::to_string(word.size()) + " unmatched edge end(s)");
  return d;
}

/// Theta graph colored (a, b, 1-a-b) or (a, b, -1-a-b).
inline TrivalentGraph theta_graph(Scalar a, Scalar b, int sign = +1) {
  TrivalentGraph g;
  g.color = {{"x", a}, {"y", b}, {"z", double(sign) - a - b}};
  g.vertices = {{0, 0, {"x", "y", "z"}}, {0, 3, {}}};
  return g;
}

/// Tetrahedron with colors chosen admissible from three parameters.
inline TrivalentGraph tetrahedron_graph(Scalar a, Scalar b, Scalar x) {
  TrivalentGraph g;
  g.color = {{"e12", a}, {"e14", b}, {"e13", 1.0 - a - b}, {"e24", x}, {"e34", 1.0 + b - x}, {"e23", a + x - 1.0}};
  g.vertices = {{0, 0, {"e12", "e14", "e13"}}, {1, 1, {"e24", "e34"}}, {0, 2, {"e23"}}, {0, 3, {}}};
  return g;
}

}  // namespace nss3m
