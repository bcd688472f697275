// Line-oriented diagram text format.
//
//   root <r>
//   strands <n>                      bottom width, 0 for closed diagrams
//   bottom <label> [@name] ...       n labels, required when n > 0
//   top <label> ...                  declared top word of an open diagram
//   slice id <pos>
//   slice xpos <pos> | slice xneg <pos>
//   slice cup <pos> <label> [@name]  label of the left leg
//   slice cap <pos>
//   slice twist <pos> +|-
//   slice coupon <pos> <name> in <k> <label>... out <m> <label>... map <re> <im> ... [@name]
//   framing <name> <int>
//   surgery <name> [<re> <im>]       surgery component, optionally with its degree
//   cut <level> <pos>
//
// label := typ <re> <im> (+|-) | eps <t> (+|-). '#' starts a comment.
#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "surgery.hpp"

namespace nss3m {

class ParseError : public DiagramError {
 public:
  ParseError(int line, const std::string& msg) : DiagramError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ParsedFile {
  SlicedDiagram diagram;
  std::vector<std::string> surgery;
  std::vector<std::optional<Scalar>> omega;  // per surgery entry
  std::optional<ArcRef> cut;

  SurgeryTriple triple(const std::vector<Scalar>& override_omega = {}) const {
    SurgeryTriple s;
    s.diagram = diagram;
    s.surgery = surgery;
    if (!override_omega.empty()) {
      if (override_omega.size() != surgery.size())
        throw DiagramError("expected " + std::to_string(surgery.size()) + " omega value(s), got " +
                           std::to_string(override_omega.size()));
      s.omega = override_omega;
      return s;
    }
    for (std::size_t i = 0; i < surgery.size(); ++i) {
      if (!omega[i]) throw DiagramError("no degree given for surgery component @" + surgery[i]);
      s.omega.push_back(*omega[i]);
    }
    return s;
  }
};

/// Parses "0.5", "-1e-3", "0.3+0.2i", "0.3-0.2i", "2i".
inline std::optional<Scalar> parse_scalar(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double a = 0;
  if (!(in >> a)) return std::nullopt;
  if (in.peek() == EOF) return Scalar(a, 0.0);
  if (in.peek() == 'i') {
    in.get();
    if (in.peek() != EOF) return std::nullopt;
    return Scalar(0.0, a);
  }
  double b = 0;
  if (!(in >> b) || in.get() != 'i' || in.peek() != EOF) return std::nullopt;
  return Scalar(a, b);
}

namespace detail {
struct Tokens {
  std::vector<std::string> t;
  std::size_t i = 0;
  int line = 0;
  bool done() const { return i >= t.size(); }
  const std::string& next(const char* what) {
    if (done()) throw ParseError(line, std::string("missing ") + what);
    return t[i++];
  }
  double real(const char* what) {
    const std::string& s = next(what);
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double v;
    if (!(in >> v) || in.peek() != EOF) throw ParseError(line, std::string("bad number for ") + what + ": '" + s + "'");
    return v;
  }
  long integer(const char* what) {
    const std::string& s = next(what);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (...) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ParseError(line, std::string("bad integer for ") + what + ": '" + s + "'");
    return v;
  }
  std::size_t index(const char* what) {
    long v = integer(what);
    if (v < 0) throw ParseError(line, std::string(what) + " must be non-negative");
    return std::size_t(v);
  }
  int orient() {
    const std::string& s = next("orientation");
    if (s == "+") return +1;
    if (s == "-") return -1;
    throw ParseError(line, "orientation must be + or -, got '" + s + "'");
  }
  StrandLabel label() {
    const std::string& k = next("color");
    if (k == "typ") {
      double re = real("color real part"), im = real("color imaginary part");
      return StrandLabel(Color::typical({re, im}), orient());
    }
    if (k == "eps") {
      long t = integer("eps index");
      return StrandLabel(Color::periodic(t), orient());
    }
    throw ParseError(line, "unknown color kind '" + k + "' (expected typ or eps)");
  }
  std::optional<std::string> name() {
    if (!done() && t[i].size() > 1 && t[i][0] == '@') return t[i++].substr(1);
    return std::nullopt;
  }
  void end() {
    if (!done()) throw ParseError(line, "unexpected trailing token '" + t[i] + "'");
  }
};
}  // namespace detail

inline ParsedFile parse_diagram(std::istream& in) {
  ParsedFile pf;
  SlicedDiagram& d = pf.diagram;
  std::string raw;
  int lineno = 0;
  std::optional<std::size_t> strands;
  bool have_root = false, have_bottom = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    detail::Tokens tk;
    tk.line = lineno;
    std::istringstream ls(raw);
    for (std::string w; ls >> w;) tk.t.push_back(w);
    if (tk.done()) continue;
    const std::string kw = tk.next("keyword");
    if (kw == "root") {
      if (have_root) throw ParseError(lineno, "duplicate root");
      long r = tk.integer("root");
      if (r < 2) throw ParseError(lineno, "root must be >= 2");
      d.root = int(r);
      have_root = true;
    } else if (kw == "strands") {
      if (strands) throw ParseError(lineno, "duplicate strands");
      strands = tk.index("strands");
    } else if (kw == "bottom") {
      if (have_bottom) throw ParseError(lineno, "duplicate bottom");
      have_bottom = true;
      while (!tk.done()) {
        d.bottom.push_back(tk.label());
        d.bottom_components.push_back(tk.name().value_or(""));
      }
    } else if (kw == "top") {
      std::vector<StrandLabel> top;
      while (!tk.done()) top.push_back(tk.label());
      d.top = top;
    } else if (kw == "slice") {
      const std::string ev = tk.next("event");
      SliceEvent e;
      std::size_t pos = tk.index("position");
      if (ev == "id") {
        e = SliceEvent::identity(pos);
      } else if (ev == "xpos") {
        e = SliceEvent::cross_pos(pos);
      } else if (ev == "xneg") {
        e = SliceEvent::cross_neg(pos);
      } else if (ev == "cup") {
        StrandLabel l = tk.label();
        e = SliceEvent::cup(pos, l, tk.name().value_or(""));
      } else if (ev == "cap") {
        e = SliceEvent::cap(pos);
      } else if (ev == "twist") {
        e = SliceEvent::twist(pos, tk.orient());
      } else if (ev == "coupon") {
        auto cp = std::make_shared<Coupon>();
        cp->name = tk.next("coupon name");
        if (tk.next("'in'") != "in") throw ParseError(lineno, "coupon: expected 'in'");
        std::size_t k = tk.index("input count");
        for (std::size_t j = 0; j < k; ++j) cp->in.push_back(tk.label());
        if (tk.next("'out'") != "out") throw ParseError(lineno, "coupon: expected 'out'");
        std::size_t m = tk.index("output count");
        for (std::size_t j = 0; j < m; ++j) cp->out.push_back(tk.label());
        if (tk.next("'map'") != "map") throw ParseError(lineno, "coupon: expected 'map'");
        RootData rd(d.root ? d.root : 2);
        std::size_t rows = 1, cols = 1;
        for (const auto& l : cp->out) rows *= module_of(rd, l.color).dim();
        for (const auto& l : cp->in) cols *= module_of(rd, l.color).dim();
        cp->map = Mat::Zero(Eigen::Index(rows), Eigen::Index(cols));
        for (std::size_t a = 0; a < rows; ++a)
          for (std::size_t b = 0; b < cols; ++b) {
            double re = tk.real("map entry"), im = tk.real("map entry");
            cp->map(Eigen::Index(a), Eigen::Index(b)) = {re, im};
          }
        e = SliceEvent::make_coupon(pos, cp, tk.name().value_or(""));
      } else {
        throw ParseError(lineno, "unknown event '" + ev + "'");
      }
      if (ev != "cup" && ev != "coupon")
        if (auto n = tk.name()) e.component = *n;
      tk.end();
      e.line = lineno;
      d.slices.push_back(std::move(e));
      continue;
    } else if (kw == "framing") {
      std::string n = tk.next("component name");
      if (!n.empty() && n[0] == '@') n = n.substr(1);
      d.framings[n] = int(tk.integer("framing"));
    } else if (kw == "surgery") {
      std::string n = tk.next("component name");
      if (!n.empty() && n[0] == '@') n = n.substr(1);
      pf.surgery.push_back(n);
      if (!tk.done()) {
        double re = tk.real("degree real part"), im = tk.real("degree imaginary part");
        pf.omega.push_back(Scalar(re, im));
      } else {
        pf.omega.push_back(std::nullopt);
      }
    } else if (kw == "cut") {
      std::size_t h = tk.index("cut level"), p = tk.index("cut position");
      pf.cut = ArcRef{h, p};
    } else {
      throw ParseError(lineno, "unknown keyword '" + kw + "'");
    }
    tk.end();
  }
  const std::size_t n = strands.value_or(0);
  if (n != d.bottom.size())
    throw ParseError(lineno, "strands " + std::to_string(n) + " but bottom word has " + std::to_string(d.bottom.size()) +
                                 " label(s)");
  return pf;
}

inline ParsedFile parse_diagram_string(const std::string& s) {
  std::istringstream in(s);
  return parse_diagram(in);
}

inline ParsedFile parse_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DiagramError("cannot open " + path);
  return parse_diagram(in);
}

namespace detail {
inline std::string num(double v) {
  std::ostringstream o;
  o.imbue(std::locale::classic());
  o << std::setprecision(17) << v;
  return o.str();
}
inline std::string label_text(const StrandLabel& l) {
  std::string c = l.color.is_typical() ? "typ " + num(l.color.alpha.real()) + " " + num(l.color.alpha.imag())
                                       : "eps " + std::to_string(l.color.t);
  return c + (l.orient > 0 ? " +" : " -");
}
}  // namespace detail

/// Inverse of parse_diagram; numbers are written with round-trip precision.
inline std::string print_diagram(const SlicedDiagram& d, const std::vector<std::string>& surgery = {},
                                 const std::vector<Scalar>& omega = {}, std::optional<ArcRef> cut = std::nullopt) {
  std::ostringstream o;
  if (d.root) o << "root " << d.root << "\n";
  o << "strands " << d.bottom.size() << "\n";
  if (!d.bottom.empty()) {
    o << "bottom";
    for (std::size_t i = 0; i < d.bottom.size(); ++i) {
      o << " " << detail::label_text(d.bottom[i]);
      if (i < d.bottom_components.size() && !d.bottom_components[i].empty()) o << " @" << d.bottom_components[i];
    }
    o << "\n";
  }
  if (d.top && !d.top->empty()) {
    o << "top";
    for (const auto& l : *d.top) o << " " << detail::label_text(l);
    o << "\n";
  }
  for (const auto& e : d.slices) {
    o << "slice " << event_name(e.kind) << " " << e.pos;
    switch (e.kind) {
      case EventKind::Cup: o << " " << detail::label_text(e.label); break;
      case EventKind::Twist: o << (e.sign > 0 ? " +" : " -"); break;
      case EventKind::Coupon: {
        const Coupon& c = *e.coupon;
        o << " " << (c.name.empty() ? "f" : c.name) << " in " << c.in.size();
        for (const auto& l : c.in) o << " " << detail::label_text(l);
        o << " out " << c.out.size();
        for (const auto& l : c.out) o << " " << detail::label_text(l);
        o << " map";
        for (Eigen::Index a = 0; a < c.map.rows(); ++a)
          for (Eigen::Index b = 0; b < c.map.cols(); ++b)
            o << " " << detail::num(c.map(a, b).real()) << " " << detail::num(c.map(a, b).imag());
        break;
      }
      default: break;
    }
    if (!e.component.empty()) o << " @" << e.component;
    o << "\n";
  }
  for (const auto& [n, f] : d.framings) o << "framing " << n << " " << f << "\n";
  for (std::size_t i = 0; i < surgery.size(); ++i) {
    o << "surgery " << surgery[i];
    if (i < omega.size()) o << " " << detail::num(omega[i].real()) << " " << detail::num(omega[i].imag());
    o << "\n";
  }
  if (cut) o << "cut " << cut->level << " " << cut->pos << "\n";
  return o.str();
}

inline std::string print_triple(const SurgeryTriple& s) { return print_diagram(s.diagram, s.surgery, s.omega); }

}  // namespace nss3m
