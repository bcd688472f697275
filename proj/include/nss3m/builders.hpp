// Diagram builders used by the catalog and the tests.
#pragma once

#include "diagram.hpp"

namespace nss3m {

namespace detail {
inline void push_twists(std::vector<SliceEvent>& s, std::size_t pos, int n) {
  for (int i = 0; i < std::abs(n); ++i) s.push_back(SliceEvent::twist(pos, n > 0 ? 1 : -1));
}

inline std::string fresh_name(const SlicedDiagram& d, const std::string& stem) {
  std::set<std::string> used;
  for (const auto& e : d.slices)
    if (!e.component.empty()) used.insert(e.component);
  for (const auto& n : d.bottom_components) used.insert(n);
  if (!used.count(stem)) return stem;
  for (int k = 2;; ++k)
    if (!used.count(stem + std::to_string(k))) return stem + std::to_string(k);
}
}  // namespace detail

inline SlicedDiagram unknot(const Color& c, int framing = 0, const std::string& name = "K") {
  SlicedDiagram d;
  d.slices.push_back(SliceEvent::cup(0, StrandLabel(c, +1), name));
  detail::push_twists(d.slices, 0, framing);
  d.slices.push_back(SliceEvent::cap(0));
  d.framings[name] = framing;
  return d;
}

/// Closure of a braid word (generator k>0 is sigma_k, k<0 its inverse) on strands colored `colors`.
/// Return strands run on the right. Components get framing `framings[c]` (default: blackboard writhe);
/// components flagged in `reversed` run downward through the braid.
inline SlicedDiagram braid_closure(const std::vector<int>& word, const std::vector<Color>& colors,
                                   std::optional<std::vector<int>> framings = std::nullopt,
                                   std::vector<std::string> names = {}, std::vector<bool> reversed = {}) {
  const std::size_t n = colors.size();
  if (n == 0) throw Error("braid_closure: no strands");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> at(n);  // strand at position
  std::iota(at.begin(), at.end(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // strands crossing at each letter
  for (int g : word) {
    std::size_t k = std::size_t(std::abs(g));
    if (k == 0 || k >= n) throw Error("braid_closure: generator out of range");
    pairs.push_back({at[k - 1], at[k]});
    std::swap(at[k - 1], at[k]);
  }
  // top position j is reached by strand at[j]; closing joins strand at[j] to strand j
  std::vector<std::size_t> comp(n, n);
  std::size_t ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::size_t x = s;
    while (comp[x] == n) {
      comp[x] = ncomp;
      std::size_t j = std::size_t(std::find(at.begin(), at.end(), x) - at.begin());
      x = j;
    }
    ++ncomp;
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (comp[s] == comp[t] && !same_color(colors[s], colors[t]))
        throw Error("braid_closure: colors differ along a component");
  if (names.empty())
    for (std::size_t c = 0; c < ncomp; ++c) names.push_back("K" + std::to_string(c + 1));
  if (names.size() != ncomp) throw Error("braid_closure: expected " + std::to_string(ncomp) + " component names");
  std::vector<int> writhe(ncomp, 0);
  for (std::size_t i = 0; i < word.size(); ++i)
    if (comp[pairs[i].first] == comp[pairs[i].second]) writhe[comp[pairs[i].first]] += word[i] > 0 ? 1 : -1;
  std::vector<int> fr = framings ? *framings : writhe;
  if (fr.size() != ncomp) throw Error("braid_closure: expected " + std::to_string(ncomp) + " framings");

  reversed.resize(ncomp, false);
  SlicedDiagram d;
  for (std::size_t i = 0; i < n; ++i)
    d.slices.push_back(SliceEvent::cup(i, StrandLabel(colors[i], reversed[comp[i]] ? -1 : +1), names[comp[i]]));
  std::vector<bool> twisted(ncomp, false);
  for (std::size_t i = 0; i < n; ++i)
    if (!twisted[comp[i]]) {
      twisted[comp[i]] = true;
      detail::push_twists(d.slices, i, fr[comp[i]] - writhe[comp[i]]);
    }
  for (int g : word) {
    std::size_t k = std::size_t(std::abs(g)) - 1;
    d.slices.push_back(g > 0 ? SliceEvent::cross_pos(k) : SliceEvent::cross_neg(k));
  }
  for (std::size_t i = n; i-- > 0;) d.slices.push_back(SliceEvent::cap(i));
  for (std::size_t c = 0; c < ncomp; ++c) d.framings[names[c]] = fr[c];
  return d;
}

/// Hopf link, clasp sign = linking number sign; 0-framed.
inline SlicedDiagram hopf(const Color& c1, const Color& c2, int sign = +1, const std::string& n1 = "A",
                          const std::string& n2 = "B") {
  int g = sign > 0 ? 1 : -1;
  return braid_closure({g, g}, {c1, c2}, std::vector<int>{0, 0}, {n1, n2});
}

/// Chain of unknots, each a meridian of the next; lk(L_i, L_{i+1}) = signs[i] (default +1).
inline SlicedDiagram chain_link(const std::vector<int>& framings, const std::vector<Color>& colors,
                                std::vector<int> signs = {}, std::vector<std::string> names = {}) {
  const std::size_t m = framings.size();
  if (m == 0 || colors.size() != m) throw Error("chain_link: need one color per framing");
  if (signs.empty()) signs.assign(m - 1, +1);
  if (signs.size() != m - 1) throw Error("chain_link: need m-1 linking signs");
  if (names.empty())
    for (std::size_t i = 0; i < m; ++i) names.push_back("L" + std::to_string(i + 1));
  SlicedDiagram d;
  d.slices.push_back(SliceEvent::cup(0, StrandLabel(colors[0], +1), names[0]));
  detail::push_twists(d.slices, 0, framings[0]);
  for (std::size_t i = 1; i < m; ++i) {
    d.slices.push_back(SliceEvent::cup(2, StrandLabel(colors[i], +1), names[i]));
    detail::push_twists(d.slices, 2, framings[i]);
    // (down, up) pair at 1: xneg has sign +1
    auto x = signs[i - 1] > 0 ? SliceEvent::cross_neg(1) : SliceEvent::cross_pos(1);
    d.slices.push_back(x);
    d.slices.push_back(x);
    d.slices.push_back(SliceEvent::cap(0));
  }
  d.slices.push_back(SliceEvent::cap(0));
  for (std::size_t i = 0; i < m; ++i) d.framings[names[i]] = framings[i];
  return d;
}

inline ArcRef chain_cut(const std::vector<int>& framings) { return ArcRef{1 + std::size_t(std::abs(framings[0])), 0}; }

/// Inserts a meridian with positive clasp around the arc `arc`, framed `framing`;
/// `arc_twist` extra twists go on the arc itself.
inline SlicedDiagram meridian_insert(const SlicedDiagram& d, ArcRef arc, const Color& color, int framing,
                                     int arc_twist = 0, std::string name = "") {
  Wiring w = analyze(d);
  if (!w.ok()) throw Error("meridian_insert: invalid diagram");
  if (arc.level >= w.words.size() || arc.pos >= w.words[arc.level].size()) throw Error("meridian_insert: no such arc");
  const StrandLabel here = w.words[arc.level][arc.pos];
  if (name.empty()) name = detail::fresh_name(d, "M");
  std::vector<SliceEvent> ins;
  const std::size_t p = arc.pos;
  ins.push_back(SliceEvent::cup(p + 1, StrandLabel(color, here.orient), name));
  ins.push_back(SliceEvent::cross_pos(p));
  ins.push_back(SliceEvent::cross_pos(p));
  detail::push_twists(ins, p + 1, framing);
  detail::push_twists(ins, p, arc_twist);
  ins.push_back(SliceEvent::cap(p + 1));
  SlicedDiagram out = d;
  out.slices.insert(out.slices.begin() + std::ptrdiff_t(arc.level), ins.begin(), ins.end());
  out.framings[name] = framing;
  std::string owner = w.component_names[w.comp_at[arc.level][arc.pos]];
  if (arc_twist != 0 && out.framings.count(owner)) out.framings[owner] += arc_twist;
  return out;
}

/// Stacks two closed diagrams; clashing component names of d2 are renamed.
inline SlicedDiagram disjoint_union(const SlicedDiagram& d1, const SlicedDiagram& d2) {
  if (!d1.closed() || !d2.closed()) throw Error("disjoint_union: both diagrams must be closed");
  SlicedDiagram out = d1;
  std::set<std::string> used;
  for (const auto& e : d1.slices)
    if (!e.component.empty()) used.insert(e.component);
  for (const auto& kv : d1.framings) used.insert(kv.first);
  std::map<std::string, std::string> ren;
  auto rename = [&](const std::string& n) {
    if (n.empty()) return n;
    auto it = ren.find(n);
    if (it != ren.end()) return it->second;
    std::string m = n;
    for (int k = 2; used.count(m); ++k) m = n + "_" + std::to_string(k);
    used.insert(m);
    ren[n] = m;
    return m;
  };
  for (auto e : d2.slices) {
    e.component = rename(e.component);
    out.slices.push_back(e);
  }
  for (const auto& [n, f] : d2.framings) out.framings[rename(n)] = f;
  if (out.root == 0) out.root = d2.root;
  return out;
}

/// A slide of an arc of a typical-colored component `e` over a Kirby-colored circle.
/// Kirby lifts are listed as multiples of the arc degree g per component name.
struct SlidePair {
  std::string description;
  SlicedDiagram pre, post;
  std::map<std::string, double> pre_lift, post_lift;  // lift = factor * g
  ArcRef pre_cut, post_cut;
};

inline std::size_t slide_family_count() { return 6; }

inline SlidePair slide_family(std::size_t k, const Color& u) {
  SlidePair s;
  auto torus = [&](int a, int fe, int fk, bool rev) {
    std::vector<int> w(std::size_t(2 * std::abs(a)), a > 0 ? 1 : -1);
    return braid_closure(w, {u, Color::typical(0.5)}, std::vector<int>{fe, fk}, {"e", "K"}, {rev, false});
  };
  switch (k) {
    case 0:
    case 1:
    case 2:
    case 3: {
      // arc over an unknotted circle K with framing fK; band-sum sign eps
      const int fK[] = {2, 3, 2, -2};
      const int ep[] = {-1, -1, +1, -1};
      const int f = fK[k], e = ep[k], fe = 0;
      const int a = 1 + e * f;
      s.description = "arc over unknot, framing " + std::to_string(f) + ", band sign " + std::to_string(e);
      // the slid arc is an (e, a) curve on the boundary torus of K
      s.pre = torus(1, fe, f, false);
      s.post = e > 0 ? torus(a, fe + f + 2, f, false) : torus(-a, fe + f - 2, f, true);
      const double h = -1.0 / double(f);
      s.pre_lift = {{"K", h}};
      s.post_lift = {{"K", h - double(e)}};
      s.pre_cut = s.post_cut = ArcRef{2, 0};
      break;
    }
    case 4: {
      // arc over the middle of a chain e - K2 - K1, K2 framed +1, band sign -1
      s.description = "arc over chain component, framing 1, band sign -1";
      Color x = Color::typical(0.5);
      s.pre = chain_link({0, 1, 2}, {u, x, x}, {+1, +1}, {"e", "K2", "K1"});
      s.post = chain_link({-1, 2, 1}, {u, x, x}, {-1, +1}, {"e", "K1", "K2"});
      s.pre_lift = {{"K2", -2.0}, {"K1", 1.0}};
      s.post_lift = {{"K1", 1.0}, {"K2", -1.0}};
      s.pre_cut = ArcRef{1, 0};
      s.post_cut = ArcRef{2, 0};
      break;
    }
    case 5: {
      // same, K2 framed -1, band sign +1
      s.description = "arc over chain component, framing -1, band sign +1";
      Color x = Color::typical(0.5);
      s.pre = chain_link({0, -1, 2}, {u, x, x}, {+1, +1}, {"e", "K2", "K1"});
      s.post = chain_link({1, 2, -1}, {u, x, x}, {+1, +1}, {"e", "K1", "K2"});
      s.pre_lift = {{"K2", 2.0 / 3.0}, {"K1", -1.0 / 3.0}};
      s.post_lift = {{"K1", -1.0 / 3.0}, {"K2", -1.0 / 3.0}};
      s.pre_cut = ArcRef{1, 0};
      s.post_cut = ArcRef{2, 0};
      break;
    }
    default: throw Error("slide_family: no case " + std::to_string(k));
  }
  return s;
}

}  // namespace nss3m
