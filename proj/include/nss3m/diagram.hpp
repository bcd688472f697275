// Sliced (Morse-position) colored ribbon diagrams and their wiring analysis.
#pragma once

#include "uhqsl2.hpp"

#include <numeric>
#include <optional>
#include <set>

namespace nss3m {

/// (color, orientation); orientation +1 points up. Normalized so color.dual is false.
struct StrandLabel {
  Color color;
  int orient = +1;

  StrandLabel() = default;
  StrandLabel(Color c, int o) : color(c), orient(o) {
    if (color.dual) {
      color.dual = false;
      orient = -orient;
    }
  }
  StrandLabel reversed() const { return StrandLabel(color, -orient); }
};

inline bool same_label(const StrandLabel& a, const StrandLabel& b, double tol = 1e-12) {
  return a.orient == b.orient && same_color(a.color, b.color, tol);
}

inline std::string to_string(const StrandLabel& l) { return to_string(l.color) + (l.orient > 0 ? "+" : "-"); }

struct Coupon {
  std::string name;
  Mat map;  // rows: out word, cols: in word
  std::vector<StrandLabel> in, out;
};

enum class EventKind { Identity, CrossPos, CrossNeg, Cup, Cap, Twist, Coupon };

struct SliceEvent {
  EventKind kind = EventKind::Identity;
  std::size_t pos = 0;
  StrandLabel label;                       // cup: left leg
  std::optional<StrandLabel> right_label;  // cup: explicit right leg (checked)
  int sign = +1;                           // twist
  std::shared_ptr<const Coupon> coupon;
  std::string component;  // optional @name tag
  int line = 0;           // source line when parsed

  static SliceEvent identity(std::size_t p = 0) { return {EventKind::Identity, p}; }
  static SliceEvent cross_pos(std::size_t p) { return {EventKind::CrossPos, p}; }
  static SliceEvent cross_neg(std::size_t p) { return {EventKind::CrossNeg, p}; }
  static SliceEvent cup(std::size_t p, StrandLabel l, std::string name = {}) {
    SliceEvent e{EventKind::Cup, p, l};
    e.component = std::move(name);
    return e;
  }
  static SliceEvent cap(std::size_t p) { return {EventKind::Cap, p}; }
  static SliceEvent twist(std::size_t p, int s) {
    SliceEvent e{EventKind::Twist, p};
    e.sign = s;
    return e;
  }
  static SliceEvent make_coupon(std::size_t p, std::shared_ptr<const Coupon> c, std::string name = {}) {
    SliceEvent e{EventKind::Coupon, p};
    e.coupon = std::move(c);
    e.component = std::move(name);
    return e;
  }
};

struct SlicedDiagram {
  int root = 0;  // 0 = unspecified
  std::vector<StrandLabel> bottom;
  std::vector<std::string> bottom_components;
  std::vector<SliceEvent> slices;
  std::optional<std::vector<StrandLabel>> top;  // declared top word of an open diagram
  std::map<std::string, int> framings;           // declared framings
  bool blackboard_framing = true;                // framing carried by Twist events

  bool closed() const { return bottom.empty() && (!top || top->empty()); }
};

/// Arc position in a diagram: boundary word between slice level-1 and slice level.
struct ArcRef {
  std::size_t level = 0;
  std::size_t pos = 0;
};

struct CrossingInfo {
  std::size_t slice = 0;
  int sign = 0;
  std::size_t comp_over = 0, comp_under = 0;
  int edge_in_over = -1, edge_out_over = -1, edge_in_under = -1, edge_out_under = -1;
};

/// Wiring analysis: words per level, components, crossings.
struct Wiring {
  std::vector<std::vector<StrandLabel>> words;    // words[h] before slice h; words.back() = top
  std::vector<std::vector<std::size_t>> comp_at;  // component index per position per level
  std::vector<std::vector<int>> edge_at;          // edge class per position per level
  std::vector<std::string> component_names;
  std::vector<bool> component_has_coupon;
  std::vector<int> writhe;      // self-crossing sign sum
  std::vector<int> twists;      // twist sign sum
  std::vector<CrossingInfo> crossings;
  std::vector<int> edge_free_loops;  // edge classes forming a crossing-less closed loop
  std::vector<std::size_t> edge_component;
  std::size_t edge_count = 0;
  std::vector<std::string> defects;
  std::size_t max_width = 0;

  bool ok() const { return defects.empty(); }
  std::size_t component_count() const { return component_names.size(); }
  std::size_t component_index(const std::string& name) const {
    for (std::size_t i = 0; i < component_names.size(); ++i)
      if (component_names[i] == name) return i;
    throw Error("unknown component @" + name);
  }
  int framing(std::size_t c) const { return writhe[c] + twists[c]; }
  /// Linking number matrix with framings on the diagonal.
  std::vector<std::vector<int>> linking_matrix() const {
    const std::size_t m = component_count();
    std::vector<std::vector<int>> twice(m, std::vector<int>(m, 0));
    for (const auto& x : crossings)
      if (x.comp_over != x.comp_under) {
        twice[x.comp_over][x.comp_under] += x.sign;
        twice[x.comp_under][x.comp_over] += x.sign;
      }
    std::vector<std::vector<int>> lk(m, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) lk[i][j] = i == j ? framing(i) : twice[i][j] / 2;
    return lk;
  }
};

namespace detail {
struct UnionFind {
  std::vector<std::size_t> p;
  std::size_t make() {
    p.push_back(p.size());
    return p.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};
}  // namespace detail

inline std::string event_name(EventKind k) {
  switch (k) {
    case EventKind::Identity: return "id";
    case EventKind::CrossPos: return "xpos";
    case EventKind::CrossNeg: return "xneg";
    case EventKind::Cup: return "cup";
    case EventKind::Cap: return "cap";
    case EventKind::Twist: return "twist";
    case EventKind::Coupon: return "coupon";
  }
  return "?";
}

inline Wiring analyze(const SlicedDiagram& d) {
  Wiring w;
  detail::UnionFind comp, edge;
  std::vector<StrandLabel> word = d.bottom;
  std::vector<std::size_t> cid;   // union-find component node per position
  std::vector<std::size_t> eid;   // union-find edge node per position
  std::vector<std::string> node_name;
  auto new_node = [&](const std::string& name) {
    std::size_t n = comp.make();
    node_name.push_back(name);
    return n;
  };
  for (std::size_t i = 0; i < word.size(); ++i) {
    cid.push_back(new_node(i < d.bottom_components.size() ? d.bottom_components[i] : ""));
    eid.push_back(edge.make());
  }
  struct RawCrossing {
    std::size_t slice;
    int sign;
    std::size_t over_node, under_node;
    std::size_t in_over, out_over, in_under, out_under;
  };
  std::vector<RawCrossing> raw;
  std::vector<std::pair<std::size_t, int>> twist_nodes;
  std::vector<std::size_t> coupon_nodes;
  std::vector<std::vector<StrandLabel>> words{word};
  std::vector<std::vector<std::size_t>> cids{cid}, eids{eid};
  std::size_t max_width = word.size();

  auto defect = [&](std::size_t s, const SliceEvent& e, const std::string& msg) {
    std::string where = "slice " + std::to_string(s) + (e.line ? " (line " + std::to_string(e.line) + ")" : "");
    w.defects.push_back(where + " " + event_name(e.kind) + ": " + msg);
  };

  for (std::size_t s = 0; s < d.slices.size(); ++s) {
    const SliceEvent& e = d.slices[s];
    const std::size_t n = word.size();
    bool bad = false;
    auto need = [&](std::size_t k) {
      if (e.pos + k > n) {
        defect(s, e, "position " + std::to_string(e.pos) + " out of range for width " + std::to_string(n));
        bad = true;
      }
    };
    switch (e.kind) {
      case EventKind::Identity:
        if (n > 0) need(1);
        break;
      case EventKind::CrossPos:
      case EventKind::CrossNeg: {
        need(2);
        if (bad) break;
        const std::size_t p = e.pos;
        const int sa = word[p].orient, sb = word[p + 1].orient;
        const int sign = e.kind == EventKind::CrossPos ? sa * sb : -sa * sb;
        // the strand leaving position p goes to p+1; it is over for CrossPos
        std::size_t ea_new = edge.make(), eb_new = edge.make();
        // after the crossing: position p holds old p+1 strand (edge eb_new), p+1 holds old p strand (ea_new)
        auto in_out = [&](std::size_t below, std::size_t above, int orient) {
          return orient > 0 ? std::pair{below, above} : std::pair{above, below};
        };
        auto [a_in, a_out] = in_out(eid[p], ea_new, sa);
        auto [b_in, b_out] = in_out(eid[p + 1], eb_new, sb);
        RawCrossing rc{s, sign, 0, 0, 0, 0, 0, 0};
        if (e.kind == EventKind::CrossPos) {
          rc.over_node = cid[p], rc.under_node = cid[p + 1];
          rc.in_over = a_in, rc.out_over = a_out, rc.in_under = b_in, rc.out_under = b_out;
        } else {
          rc.over_node = cid[p + 1], rc.under_node = cid[p];
          rc.in_over = b_in, rc.out_over = b_out, rc.in_under = a_in, rc.out_under = a_out;
        }
        raw.push_back(rc);
        std::swap(word[p], word[p + 1]);
        std::swap(cid[p], cid[p + 1]);
        eid[p] = eb_new;
        eid[p + 1] = ea_new;
        break;
      }
      case EventKind::Cup: {
        if (e.pos > n) {
          defect(s, e, "position out of range");
          bad = true;
          break;
        }
        StrandLabel left = e.label, right = e.label.reversed();
        if (e.right_label && !same_label(*e.right_label, right)) {
          defect(s, e, "label mismatch: legs " + to_string(left) + " and " + to_string(*e.right_label));
        }
        std::size_t c = new_node(e.component);
        std::size_t ed = edge.make();
        word.insert(word.begin() + std::ptrdiff_t(e.pos), {left, right});
        cid.insert(cid.begin() + std::ptrdiff_t(e.pos), {c, c});
        eid.insert(eid.begin() + std::ptrdiff_t(e.pos), {ed, ed});
        break;
      }
      case EventKind::Cap: {
        need(2);
        if (bad) break;
        const std::size_t p = e.pos;
        if (!same_label(word[p], word[p + 1].reversed()))
          defect(s, e, "label mismatch: " + to_string(word[p]) + " against " + to_string(word[p + 1]));
        comp.unite(cid[p], cid[p + 1]);
        edge.unite(eid[p], eid[p + 1]);
        word.erase(word.begin() + std::ptrdiff_t(p), word.begin() + std::ptrdiff_t(p + 2));
        cid.erase(cid.begin() + std::ptrdiff_t(p), cid.begin() + std::ptrdiff_t(p + 2));
        eid.erase(eid.begin() + std::ptrdiff_t(p), eid.begin() + std::ptrdiff_t(p + 2));
        break;
      }
      case EventKind::Twist:
        need(1);
        if (bad) break;
        if (e.sign != 1 && e.sign != -1) defect(s, e, "twist sign must be +1 or -1");
        twist_nodes.push_back({cid[e.pos], e.sign});
        break;
      case EventKind::Coupon: {
        if (!e.coupon) {
          defect(s, e, "missing coupon data");
          break;
        }
        const Coupon& cp = *e.coupon;
        need(cp.in.size());
        if (bad) break;
        for (std::size_t i = 0; i < cp.in.size(); ++i)
          if (!same_label(word[e.pos + i], cp.in[i]))
            defect(s, e, "label mismatch on input " + std::to_string(i) + ": " + to_string(word[e.pos + i]) +
                             " against " + to_string(cp.in[i]));
        std::size_t c = new_node(e.component);
        coupon_nodes.push_back(c);
        for (std::size_t i = 0; i < cp.in.size(); ++i) comp.unite(cid[e.pos + i], c);
        const auto first = std::ptrdiff_t(e.pos), last = std::ptrdiff_t(e.pos + cp.in.size());
        word.erase(word.begin() + first, word.begin() + last);
        cid.erase(cid.begin() + first, cid.begin() + last);
        eid.erase(eid.begin() + first, eid.begin() + last);
        std::vector<std::size_t> newc(cp.out.size(), c), newe;
        for (std::size_t i = 0; i < cp.out.size(); ++i) newe.push_back(edge.make());
        word.insert(word.begin() + first, cp.out.begin(), cp.out.end());
        cid.insert(cid.begin() + first, newc.begin(), newc.end());
        eid.insert(eid.begin() + first, newe.begin(), newe.end());
        break;
      }
    }
    max_width = std::max(max_width, word.size());
    words.push_back(word);
    cids.push_back(cid);
    eids.push_back(eid);
  }

  if (d.top) {
    if (d.top->size() != word.size()) {
      w.defects.push_back("top word has width " + std::to_string(word.size()) + ", declared " +
                          std::to_string(d.top->size()));
    } else {
      for (std::size_t i = 0; i < word.size(); ++i)
        if (!same_label(word[i], (*d.top)[i])) w.defects.push_back("top word label mismatch at position " + std::to_string(i));
    }
  } else if (!word.empty()) {
    w.defects.push_back("open wiring: " + std::to_string(word.size()) + " dangling arc(s) at the top");
  }

  // components
  std::map<std::size_t, std::size_t> root_to_comp;
  auto comp_of = [&](std::size_t node) {
    std::size_t rt = comp.find(node);
    auto it = root_to_comp.find(rt);
    if (it != root_to_comp.end()) return it->second;
    std::size_t idx = w.component_names.size();
    root_to_comp[rt] = idx;
    w.component_names.push_back("");
    w.component_has_coupon.push_back(false);
    return idx;
  };
  for (std::size_t node = 0; node < node_name.size(); ++node) {
    std::size_t c = comp_of(node);
    const std::string& nm = node_name[node];
    if (nm.empty()) continue;
    if (w.component_names[c].empty()) {
      w.component_names[c] = nm;
    } else if (w.component_names[c] != nm) {
      w.defects.push_back("component name conflict: @" + w.component_names[c] + " and @" + nm);
    }
  }
  {
    std::set<std::string> used;
    for (std::size_t c = 0; c < w.component_names.size(); ++c) {
      if (w.component_names[c].empty()) continue;
      if (!used.insert(w.component_names[c]).second)
        w.defects.push_back("component name @" + w.component_names[c] + " used by two components");
    }
    for (std::size_t c = 0, k = 1; c < w.component_names.size(); ++c)
      if (w.component_names[c].empty()) {
        while (used.count("K" + std::to_string(k))) ++k;
        w.component_names[c] = "K" + std::to_string(k);
        used.insert(w.component_names[c]);
      }
  }
  for (auto n : coupon_nodes) w.component_has_coupon[comp_of(n)] = true;
  const std::size_t m = w.component_names.size();
  w.writhe.assign(m, 0);
  w.twists.assign(m, 0);
  for (auto [n, sg] : twist_nodes) w.twists[comp_of(n)] += sg;

  std::map<std::size_t, int> edge_class;
  auto ecl = [&](std::size_t e) {
    std::size_t rt = edge.find(e);
    auto it = edge_class.find(rt);
    if (it != edge_class.end()) return it->second;
    int k = int(edge_class.size());
    edge_class[rt] = k;
    return k;
  };
  std::set<int> touched;
  for (const auto& rc : raw) {
    CrossingInfo x;
    x.slice = rc.slice;
    x.sign = rc.sign;
    x.comp_over = comp_of(rc.over_node);
    x.comp_under = comp_of(rc.under_node);
    x.edge_in_over = ecl(rc.in_over);
    x.edge_out_over = ecl(rc.out_over);
    x.edge_in_under = ecl(rc.in_under);
    x.edge_out_under = ecl(rc.out_under);
    for (int ed : {x.edge_in_over, x.edge_out_over, x.edge_in_under, x.edge_out_under}) touched.insert(ed);
    if (x.comp_over == x.comp_under) w.writhe[x.comp_over] += x.sign;
    w.crossings.push_back(x);
  }
  w.words = std::move(words);
  w.max_width = max_width;
  w.comp_at.resize(cids.size());
  w.edge_at.resize(eids.size());
  for (std::size_t h = 0; h < cids.size(); ++h) {
    for (auto n : cids[h]) w.comp_at[h].push_back(comp_of(n));
    for (auto e : eids[h]) w.edge_at[h].push_back(ecl(e));
  }
  w.edge_count = edge_class.size();
  w.edge_component.assign(w.edge_count, 0);
  for (std::size_t h = 0; h < w.edge_at.size(); ++h)
    for (std::size_t i = 0; i < w.edge_at[h].size(); ++i) w.edge_component[std::size_t(w.edge_at[h][i])] = w.comp_at[h][i];
  for (int k = 0; k < int(w.edge_count); ++k)
    if (!touched.count(k)) w.edge_free_loops.push_back(k);

  for (const auto& [name, f] : d.framings) {
    bool found = false;
    for (std::size_t c = 0; c < m; ++c)
      if (w.component_names[c] == name) {
        found = true;
        if (d.blackboard_framing && w.framing(c) != f)
          w.defects.push_back("framing mismatch on @" + name + ": declared " + std::to_string(f) + ", diagram has " +
                              std::to_string(w.framing(c)));
      }
    if (!found) w.defects.push_back("framing declared for unknown component @" + name);
  }
  return w;
}

/// Defect report; empty means the diagram is well formed.
inline std::vector<std::string> validate(const SlicedDiagram& d) { return analyze(d).defects; }

/// First arc (lowest level, leftmost) of a component that carries a typical color.
inline std::optional<ArcRef> first_arc(const Wiring& w, std::size_t comp) {
  for (std::size_t h = 0; h < w.words.size(); ++h)
    for (std::size_t i = 0; i < w.words[h].size(); ++i)
      if (w.comp_at[h][i] == comp && w.words[h][i].color.is_typical()) return ArcRef{h, i};
  return std::nullopt;
}

}  // namespace nss3m
