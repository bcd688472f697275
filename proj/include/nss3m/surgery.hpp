// Surgery invariants N_r and N0_r from Kirby-colored framed links.
#pragma once

#include "builders.hpp"
#include "engine.hpp"

#include <cstdlib>
#include <thread>

namespace nss3m {

/// Triple rejected: cocycle violated or some meridian degree is critical.
class NonComputableError : public Error {
 public:
  using Error::Error;
};

/// Critical set: Z/2Z, or {0} when the r = 2 refinement is enabled.
struct CriticalSet {
  bool refined_r2 = false;

  bool contains(const RootData& rd, GradeClass g, double tol = 1e-9) const {
    if (refined_r2 && rd.r == 2) return g.is_zero(tol);
    return g.is_integral(tol);
  }
};

struct KirbyColor {
  Scalar lift;
  GradeClass degree;
  std::vector<std::pair<Scalar, Color>> terms;  // (d(W), W)
};

/// Omega_g with representatives V_{g-r+1+2k} (+ 2r*shift), k = 0..r-1.
inline KirbyColor kirby_color(const RootData& rd, Scalar g, const CriticalSet& x = {}, long shift = 0) {
  KirbyColor k;
  k.lift = g;
  k.degree = GradeClass(g);
  if (x.contains(rd, k.degree)) throw NonComputableError("Kirby color of non-generic degree " + format_scalar(g, 6));
  for (int j = 0; j < rd.r; ++j) {
    Scalar beta = g - double(rd.r - 1) + 2.0 * j + 2.0 * double(rd.r) * double(shift);
    k.terms.push_back({mod_dim(rd, beta), Color::typical(beta)});
  }
  return k;
}

struct LinkingData {
  std::vector<std::vector<int>> matrix;
  int sigma_plus = 0, sigma_minus = 0;
  int nullity() const { return int(matrix.size()) - sigma_plus - sigma_minus; }
};

inline LinkingData linking_data(const std::vector<std::vector<int>>& a) {
  LinkingData ld;
  ld.matrix = a;
  const auto m = Eigen::Index(a.size());
  if (m == 0) return ld;
  Eigen::MatrixXd x(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = a[std::size_t(i)][std::size_t(j)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (es.eigenvalues()(i) > 1e-9) ++ld.sigma_plus;
    if (es.eigenvalues()(i) < -1e-9) ++ld.sigma_minus;
  }
  return ld;
}

/// Surgery presentation: diagram with named surgery components (L) plus graph part (T), and omega lifts.
struct SurgeryTriple {
  SlicedDiagram diagram;
  std::vector<std::string> surgery;
  std::vector<Scalar> omega;
};

struct TripleAnalysis {
  Wiring wiring;
  std::vector<std::size_t> l_comp;  // component index per surgery entry
  std::vector<std::size_t> t_comp;  // remaining components
  LinkingData link;                 // restricted to L
  std::vector<std::string> defects;
  std::vector<std::string> noncomputable;
};

inline TripleAnalysis analyze_triple(const RootData& rd, const SurgeryTriple& s, const CriticalSet& x = {}) {
  TripleAnalysis ta;
  ta.wiring = analyze(s.diagram);
  const Wiring& w = ta.wiring;
  for (const auto& d : w.defects) ta.defects.push_back(d);
  if (!w.ok()) return ta;
  if (s.omega.size() != s.surgery.size())
    ta.defects.push_back("omega has " + std::to_string(s.omega.size()) + " values for " + std::to_string(s.surgery.size()) +
                         " surgery components");
  std::vector<bool> is_l(w.component_count(), false);
  for (const auto& name : s.surgery) {
    std::size_t c = 0;
    try {
      c = w.component_index(name);
    } catch (const Error&) {
      ta.defects.push_back("unknown surgery component @" + name);
      continue;
    }
    if (w.component_has_coupon[c]) ta.defects.push_back("surgery component @" + name + " contains a coupon");
    is_l[c] = true;
    ta.l_comp.push_back(c);
  }
  for (std::size_t c = 0; c < w.component_count(); ++c)
    if (!is_l[c]) ta.t_comp.push_back(c);
  if (!ta.defects.empty()) return ta;

  const auto full = w.linking_matrix();
  const std::size_t m = ta.l_comp.size();
  std::vector<std::vector<int>> lm(m, std::vector<int>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) lm[i][j] = full[ta.l_comp[i]][ta.l_comp[j]];
  ta.link = linking_data(lm);

  // degree of each T component, read from its first arc (closed loops only)
  std::vector<std::optional<GradeClass>> tdeg(w.component_count());
  for (std::size_t h = 0; h < w.words.size(); ++h)
    for (std::size_t i = 0; i < w.words[h].size(); ++i) {
      std::size_t c = w.comp_at[h][i];
      if (is_l[c] || tdeg[c] || w.component_has_coupon[c]) continue;
      const auto& l = w.words[h][i];
      GradeClass g = degree(rd, l.color);
      tdeg[c] = l.orient > 0 ? g : -g;
    }
  // at coupons, degrees must balance (compatibility of graph colors)
  for (std::size_t si = 0; si < s.diagram.slices.size(); ++si) {
    const auto& e = s.diagram.slices[si];
    if (e.kind != EventKind::Coupon) continue;
    GradeClass in(0.0), out(0.0);
    for (const auto& l : e.coupon->in) in = in + (l.orient > 0 ? degree(rd, l.color) : -degree(rd, l.color));
    for (const auto& l : e.coupon->out) out = out + (l.orient > 0 ? degree(rd, l.color) : -degree(rd, l.color));
    if (!in.equals(out)) ta.defects.push_back("coupon " + e.coupon->name + " does not preserve degree");
  }
  for (std::size_t j = 0; j < m; ++j) {
    Scalar row = 0.0;
    for (std::size_t h = 0; h < m; ++h) row += double(lm[j][h]) * s.omega[h];
    for (auto t : ta.t_comp) {
      int lk = full[ta.l_comp[j]][t];
      if (lk == 0) continue;
      if (!tdeg[t]) {
        ta.defects.push_back("graph component @" + w.component_names[t] + " links @" + s.surgery[j] +
                             "; meridian contribution of a graph is not supported");
        continue;
      }
      row += double(lk) * tdeg[t]->value;
    }
    if (!GradeClass(row).is_zero(1e-8))
      ta.defects.push_back("cocycle violated at component " + std::to_string(j + 1) + " (@" + s.surgery[j] + ")");
  }
  for (std::size_t j = 0; j < m; ++j)
    if (x.contains(rd, GradeClass(s.omega[j])))
      ta.noncomputable.push_back("omega at component " + std::to_string(j + 1) + " (@" + s.surgery[j] +
                                 ") is critical: " + format_scalar(s.omega[j], 6));
  if (m == 0) {
    bool typical = false;
    for (const auto& word : w.words)
      for (const auto& l : word) typical = typical || l.color.is_typical();
    if (!typical) ta.noncomputable.push_back("empty link and the graph has no typical arc");
  }
  return ta;
}

inline std::vector<std::string> validate_triple(const RootData& rd, const SurgeryTriple& s, const CriticalSet& x = {}) {
  return analyze_triple(rd, s, x).defects;
}

inline bool is_computable(const RootData& rd, const SurgeryTriple& s, const CriticalSet& x = {}) {
  auto ta = analyze_triple(rd, s, x);
  return ta.defects.empty() && ta.noncomputable.empty();
}

inline unsigned worker_count() {
  if (const char* env = std::getenv("NSS3M_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return unsigned(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i in [0,n) on up to worker_count() threads; results by index.
template <class F>
std::vector<Scalar> parallel_map(std::size_t n, F&& f) {
  std::vector<Scalar> out(n);
  const unsigned nt = std::min<unsigned>(worker_count(), unsigned(std::max<std::size_t>(n, 1)));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errs(nt);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) out[i] = f(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Cup slices of every component, for recoloring.
inline std::vector<std::vector<std::size_t>> cups_by_component(const SlicedDiagram& d, const Wiring& w) {
  std::vector<std::vector<std::size_t>> out(w.component_count());
  for (std::size_t s = 0; s < d.slices.size(); ++s)
    if (d.slices[s].kind == EventKind::Cup) out[w.comp_at[s + 1][d.slices[s].pos]].push_back(s);
  return out;
}

/// F' with the listed components colored by Kirby colors, expanded multilinearly (fixed summation order).
inline Scalar kirby_fprime(const Engine& eng, const SlicedDiagram& d, const std::vector<std::string>& comps,
                           const std::vector<KirbyColor>& colors, ArcRef cut) {
  Wiring w = analyze(d);
  if (!w.ok()) throw DiagramError("invalid diagram: " + w.defects.front());
  auto cups = cups_by_component(d, w);
  std::vector<std::size_t> idx;
  for (const auto& n : comps) idx.push_back(w.component_index(n));
  std::size_t total = 1;
  for (const auto& k : colors) total *= k.terms.size();
  auto term = [&](std::size_t code) {
    SlicedDiagram dd = d;
    Scalar coef = 1.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const auto& kt = colors[j].terms;
      const auto& [cf, col] = kt[code % kt.size()];
      code /= kt.size();
      coef *= cf;
      for (auto s : cups[idx[j]]) dd.slices[s].label = StrandLabel(col, dd.slices[s].label.orient);
    }
    return coef * eng.modified_eval(dd, cut);
  };
  auto vals = parallel_map(total, term);
  Scalar sum = 0.0;
  for (auto v : vals) sum += v;
  return sum;
}

/// Strand U with a (sign)-framed Kirby-colored meridian and a (sign) twist on U; returns <T_sign>.
inline Scalar delta_pattern(const Engine& eng, Scalar u, int sign, const CriticalSet& x = {}) {
  const RootData& rd = eng.root();
  Color cu = Color::typical(u);
  SlicedDiagram d = braid_closure({1, 1}, {cu, Color::typical(0.5)}, std::vector<int>{sign, sign}, {"U", "M"});
  KirbyColor k = kirby_color(rd, -double(sign) * (u + double(rd.r - 1)), x);
  return kirby_fprime(eng, d, {"M"}, {k}, ArcRef{2, 0}) / mod_dim(rd, u);
}

struct DeltaPM {
  Scalar plus, minus;
  double spread = 0;  // max relative deviation across samples
  bool nondegenerate() const { return std::abs(plus * minus) > 1e-9; }
};

inline const std::vector<Scalar>& delta_samples() {
  static const std::vector<Scalar> s{{0.5, 0.0}, {3.0 / 7.0, 0.0}, {0.2, 0.1}, {1.3, -0.4}, {0.77, 0.05}};
  return s;
}

/// Delta_+ and Delta_-, with (g,U)-independence measured over five samples; cached per (r, width cap).
inline DeltaPM delta_pm_raw(const Engine& eng) {
  static std::mutex mu;
  static std::map<std::pair<int, std::size_t>, DeltaPM> cache;
  const auto key = std::make_pair(eng.root().r, eng.width_cap());
  {
    std::lock_guard<std::mutex> g(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  DeltaPM out;
  std::vector<Scalar> p, m;
  for (auto u : delta_samples()) {
    p.push_back(delta_pattern(eng, u, +1));
    m.push_back(delta_pattern(eng, u, -1));
  }
  out.plus = p[0];
  out.minus = m[0];
  for (std::size_t i = 1; i < p.size(); ++i) {
    out.spread = std::max(out.spread, std::abs(p[i] - p[0]) / std::max(1.0, std::abs(p[0])));
    out.spread = std::max(out.spread, std::abs(m[i] - m[0]) / std::max(1.0, std::abs(m[0])));
  }
  std::lock_guard<std::mutex> g(mu);
  cache[key] = out;
  return out;
}

/// Throws if independence or non-degeneracy fails.
inline DeltaPM delta_pm(const Engine& eng) {
  DeltaPM d = delta_pm_raw(eng);
  if (d.spread > 1e-8) throw DefectError("Delta depends on (g,U): spread " + std::to_string(d.spread));
  if (!d.nondegenerate())
    throw DefectError("non-degeneracy fails at r=" + std::to_string(eng.root().r) + ": Delta+ * Delta- = 0");
  return d;
}

struct InvariantReport {
  Scalar value;
  LinkingData link;
  std::size_t terms = 0;
  ArcRef cut;
  Scalar fprime;
};

struct InvariantOptions {
  CriticalSet critical;
  long rep_shift = 0;
};

/// Cut rule: first typical arc of T, else first arc of L_1.
inline ArcRef default_surgery_cut(const TripleAnalysis& ta) {
  const Wiring& w = ta.wiring;
  std::optional<ArcRef> best;
  for (std::size_t h = 0; h < w.words.size() && !best; ++h)
    for (std::size_t i = 0; i < w.words[h].size(); ++i) {
      std::size_t c = w.comp_at[h][i];
      if (std::find(ta.t_comp.begin(), ta.t_comp.end(), c) != ta.t_comp.end() && w.words[h][i].color.is_typical()) {
        best = ArcRef{h, i};
        break;
      }
    }
  if (!best && !ta.l_comp.empty()) best = first_arc(w, ta.l_comp[0]);
  if (!best) throw NonComputableError("no typical arc to cut");
  return *best;
}

inline InvariantReport invariant_N_report(const Engine& eng, const SurgeryTriple& s, const InvariantOptions& opt = {}) {
  const RootData& rd = eng.root();
  TripleAnalysis ta = analyze_triple(rd, s, opt.critical);
  if (!ta.defects.empty()) {
    std::string msg;
    for (const auto& d : ta.defects) msg += (msg.empty() ? "" : "; ") + d;
    if (!ta.wiring.ok()) throw DiagramError(msg);
    throw NonComputableError(msg);
  }
  if (!ta.noncomputable.empty()) throw NonComputableError("not computable: " + ta.noncomputable.front());
  InvariantReport rep;
  rep.link = ta.link;
  std::vector<KirbyColor> kc;
  for (auto a : s.omega) kc.push_back(kirby_color(rd, a, opt.critical, opt.rep_shift));
  rep.terms = 1;
  for (const auto& k : kc) rep.terms *= k.terms.size();
  rep.cut = default_surgery_cut(ta);
  // the cut arc of L_1 is recolored per term; its color is always typical
  rep.fprime = kirby_fprime(eng, s.diagram, s.surgery, kc, rep.cut);
  DeltaPM dpm = delta_pm(eng);
  Scalar denom = std::pow(dpm.plus, rep.link.sigma_plus) * std::pow(dpm.minus, rep.link.sigma_minus);
  rep.value = rep.fprime / denom;
  return rep;
}

inline Scalar invariant_N(const Engine& eng, const SurgeryTriple& s, const InvariantOptions& opt = {}) {
  return invariant_N_report(eng, s, opt).value;
}

/// F' of the pre and post diagrams of a slide, circles Kirby-colored with lifts from the slide data.
inline std::pair<Scalar, Scalar> slide_fprimes(const Engine& eng, const SlidePair& sp, const Color& u) {
  const Scalar g = u.alpha + double(eng.root().r - 1);
  auto side = [&](const SlicedDiagram& d, const std::map<std::string, double>& lift, ArcRef cut) {
    std::vector<std::string> names;
    std::vector<KirbyColor> kc;
    for (const auto& [n, f] : lift) {
      names.push_back(n);
      kc.push_back(kirby_color(eng.root(), f * g));
    }
    return kirby_fprime(eng, d, names, kc, cut);
  };
  return {side(sp.pre, sp.pre_lift, sp.pre_cut), side(sp.post, sp.post_lift, sp.post_cut)};
}

/// F' of T with an eps-framed meridian (Kirby colored) around `arc`, the arc twisted by eps to compensate.
inline Scalar blowup_fprime(const Engine& eng, const SlicedDiagram& d, ArcRef arc, int eps) {
  Wiring w = analyze(d);
  const auto& l = w.words.at(arc.level).at(arc.pos);
  if (!l.color.is_typical()) throw Error("blowup: arc is not typical");
  SlicedDiagram b = meridian_insert(d, arc, Color::typical(0.5), eps, eps, detail::fresh_name(d, "O"));
  const std::string name = b.slices[arc.level].component;
  const Scalar deg = l.color.alpha + double(eng.root().r - 1);
  KirbyColor k = kirby_color(eng.root(), -double(eps) * deg);
  return kirby_fprime(eng, b, {name}, {k}, arc);
}

/// Adds a positive 0-framed meridian colored V around the arc; V joins T.
inline SurgeryTriple h_stabilize(const RootData& rd, const SurgeryTriple& s, ArcRef arc, const Color& v,
                                 const CriticalSet& x = {}) {
  Wiring w = analyze(s.diagram);
  if (!w.ok()) throw DiagramError("h_stabilize: invalid diagram");
  const auto& l = w.words.at(arc.level).at(arc.pos);
  if (!l.color.is_typical()) throw Error("h_stabilize: arc is not typical");
  if (x.contains(rd, degree(rd, v))) throw NonComputableError("h_stabilize: degree of V is not generic");
  SurgeryTriple out = s;
  out.diagram = meridian_insert(s.diagram, arc, v, 0, 0, detail::fresh_name(s.diagram, "H"));
  return out;
}

/// <H(V,W)>: strand W encircled by a positive 0-framed meridian colored V.
inline Scalar pairing_H(const Engine& eng, const Color& v, const Color& w) {
  SlicedDiagram d = hopf(w, v, +1, "W", "V");
  return eng.modified_eval(d, ArcRef{2, 0}) / mod_dim(eng.root(), w.alpha);
}

inline SurgeryTriple connected_sum(const SurgeryTriple& s1, const SurgeryTriple& s2) {
  SurgeryTriple out;
  out.diagram = disjoint_union(s1.diagram, s2.diagram);
  out.surgery = s1.surgery;
  out.omega = s1.omega;
  // reproduce the renaming of disjoint_union for d2's names
  std::set<std::string> used;
  for (const auto& e : s1.diagram.slices)
    if (!e.component.empty()) used.insert(e.component);
  for (const auto& kv : s1.diagram.framings) used.insert(kv.first);
  std::map<std::string, std::string> ren;
  auto rename = [&](const std::string& n) {
    auto it = ren.find(n);
    if (it != ren.end()) return it->second;
    std::string m = n;
    for (int k = 2; used.count(m); ++k) m = n + "_" + std::to_string(k);
    used.insert(m);
    return ren[n] = m;
  };
  for (const auto& e : s2.diagram.slices)
    if (!e.component.empty()) rename(e.component);
  for (const auto& kv : s2.diagram.framings) rename(kv.first);
  for (std::size_t i = 0; i < s2.surgery.size(); ++i) {
    out.surgery.push_back(rename(s2.surgery[i]));
    out.omega.push_back(s2.omega[i]);
  }
  return out;
}

/// (S^3, u_V): 0-framed unknot colored V, no surgery.
inline SurgeryTriple s3_with_unknot(const Color& v, const std::string& name = "u") {
  SurgeryTriple s;
  s.diagram = unknot(v, 0, name);
  return s;
}

inline Scalar invariant_N0(const Engine& eng, const SurgeryTriple& s, const Color& v, const InvariantOptions& opt = {}) {
  if (!v.is_typical()) throw Error("N0 needs a typical auxiliary color");
  SurgeryTriple t = connected_sum(s, s3_with_unknot(v));
  return invariant_N(eng, t, opt) / mod_dim(eng.root(), v.alpha);
}

}  // namespace nss3m
