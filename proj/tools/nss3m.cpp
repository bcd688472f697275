// nss3m: command-line front end.
//
// Exit codes: 0 ok, 1 selftest failure, 2 parse/validation/usage error,
// 3 non-computable triple, 4 numeric defect.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <nss3m/selftest.hpp>
#include <nss3m/textio.hpp>

using namespace nss3m;

namespace {

struct RunConfig {
  int root = 2;
  bool root_given = false;
  double tol = 1e-9;
  std::size_t width_cap = 8;
  int precision = 10;
  bool report = false;
};

struct Source {
  std::string file, link, manifold;
  std::string alpha = "0.5";
  std::size_t presentation = 0, sample = 0;
  std::vector<std::string> omega;
  std::string cut;
};

Scalar scalar_arg(const std::string& s, const char* what) {
  auto v = parse_scalar(s);
  if (!v) throw Error(std::string("bad ") + what + " '" + s + "'");
  return *v;
}

std::vector<Scalar> scalar_list(const std::vector<std::string>& v, const char* what) {
  std::vector<Scalar> out;
  for (const auto& s : v) out.push_back(scalar_arg(s, what));
  return out;
}

int effective_root(const RunConfig& c, int file_root) {
  if (c.root_given || !file_root) return c.root;
  return file_root;
}

Engine make_engine(const RunConfig& c, int r) { return Engine(RootData(r, c.tol), c.width_cap); }

Engine r2_engine(const RunConfig& c) {
  if (c.root_given && c.root != 2) throw Error("this command works at r=2 only");
  return make_engine(c, 2);
}

ParsedFile load_diagram(const Source& s) {
  if (!s.file.empty() && !s.link.empty()) throw Error("give a file or --link, not both");
  if (!s.link.empty()) {
    ParsedFile p;
    p.diagram = catalog_link(s.link, scalar_arg(s.alpha, "--alpha"));
    return p;
  }
  if (s.file.empty()) throw Error("no input: give a diagram file or --link");
  return parse_diagram_file(s.file);
}

std::optional<ArcRef> parse_cut(const std::string& s, const SlicedDiagram& d, std::optional<ArcRef> dflt) {
  if (s.empty()) return dflt;
  if (s == "none") return std::nullopt;
  if (s == "auto") {
    Wiring w = analyze(d);
    for (std::size_t c = 0; c < w.component_names.size(); ++c)
      if (auto a = first_arc(w, c); a && w.words[a->level][a->pos].color.is_typical()) return a;
    throw DiagramError("no typical arc to cut");
  }
  std::size_t level = 0, pos = 0;
  char comma = 0;
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  if (!(in >> level >> comma >> pos) || comma != ',') throw Error("bad --cut '" + s + "', expected level,pos");
  return ArcRef{level, pos};
}

bool no_input(const Source& s) { return s.file.empty() && s.link.empty() && s.manifold.empty(); }

// No input at all means S^3 with the empty graph.
SurgeryTriple load_triple(const Source& s, int r, std::string* label = nullptr) {
  if (no_input(s)) {
    if (label) *label = "S3";
    return SurgeryTriple{};
  }
  if (!s.manifold.empty()) {
    const auto& m = find_manifold(s.manifold);
    if (s.presentation >= m.presentations.size()) throw Error("presentation index out of range");
    const auto samples = m.samples();
    if (s.sample >= samples.size()) throw Error("sample index out of range");
    const auto& p = m.presentations[s.presentation];
    if (label) *label = m.name + " " + p.name;
    SurgeryTriple t = p.build(samples[s.sample], r);
    if (!s.omega.empty()) t = with_omega(t, scalar_list(s.omega, "--omega"));
    return t;
  }
  ParsedFile f = load_diagram(s);
  if (label) *label = s.file.empty() ? s.link : s.file;
  return f.triple(scalar_list(s.omega, "--omega"));
}

std::string fmt_list(const std::vector<Scalar>& v, int prec) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_scalar(v[i], prec);
  return out + ")";
}

std::string fmt_res(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

double rel_residual(Scalar a, Scalar b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

class Table {
 public:
  explicit Table(std::vector<std::string> head) { rows_.push_back(std::move(head)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& o) const {
    std::vector<std::size_t> w;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (w.size() <= i) w.push_back(0);
        w[i] = std::max(w[i], r[i].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(w[i] - r[i].size() + 2, ' ');
      }
      o << line << "\n";
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

void print_matrix(std::ostream& o, const std::vector<std::vector<int>>& a) {
  for (const auto& row : a) {
    o << "  ";
    for (int v : row) o << std::setw(4) << v;
    o << "\n";
  }
}

// ---------------------------------------------------------------- commands

int cmd_eval(const RunConfig& c, const Source& s) {
  ParsedFile f = load_diagram(s);
  Engine eng = make_engine(c, effective_root(c, f.diagram.root));
  auto cut = parse_cut(s.cut, f.diagram, f.cut);
  Scalar v = cut ? eng.modified_eval(f.diagram, *cut) : eng.closed_value(f.diagram);
  std::cout << format_scalar(v, c.precision) << "\n";
  return 0;
}

int cmd_invariant(const RunConfig& c, const Source& s, const std::string& variant, const std::string& aux) {
  int file_root = 0;
  if (s.manifold.empty() && !no_input(s)) file_root = load_diagram(s).diagram.root;
  const int r = effective_root(c, file_root);
  Engine eng = make_engine(c, r);
  SurgeryTriple t = load_triple(s, r);
  if (variant == "N0") {
    Color v = Color::typical(scalar_arg(aux, "--aux"));
    std::cout << format_scalar(invariant_N0(eng, t, v), c.precision) << "\n";
    return 0;
  }
  if (variant != "N") throw Error("unknown variant '" + variant + "'");
  InvariantReport rep = invariant_N_report(eng, t);
  std::cout << format_scalar(rep.value, c.precision) << "\n";
  if (c.report) {
    std::cout << "sigma+ " << rep.link.sigma_plus << "\nsigma- " << rep.link.sigma_minus << "\nlinking matrix\n";
    print_matrix(std::cout, rep.link.matrix);
    std::cout << "kirby terms " << rep.terms << "\ncut " << rep.cut.level << "," << rep.cut.pos << "\nF' "
              << format_scalar(rep.fprime, c.precision) << "\n";
  }
  return 0;
}

int cmd_alexander(const RunConfig& c, const Source& s) {
  ParsedFile f = load_diagram(s);
  (void)c;
  PlanarDiagram pd = planar_diagram(f.diagram);
  ConwayFunction cf = conway_function(f.diagram);
  std::cout << "components " << pd.component_count << "\n";
  std::cout << "alexander " << fox_alexander(f.diagram).to_string() << "\n";
  std::cout << "conway-function " << cf.to_string() << (cf.anchored ? "" : "  (sign unanchored)") << "\n";
  std::cout << "conway-polynomial " << conway_skein(pd).to_string() << "\n";
  return 0;
}

std::vector<LensRow> print_lens(const RunConfig& c, const Engine& eng, long p, long q) {
  auto rows = lens_table(eng, p, q, 1e-6);
  std::cout << "L(" << p << "," << q << ")  chain [";
  const auto sp = lens_spec(p, q);
  for (std::size_t i = 0; i < sp.chain.size(); ++i) std::cout << (i ? "," : "") << sp.chain[i];
  std::cout << "]\n";
  Table t({"omega", "engine", "k", "closed-form", "residual"});
  for (const auto& r : rows) {
    std::string ks;
    for (long k : r.ks) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    t.add({fmt_list(r.omega, c.precision), format_scalar(r.engine, c.precision), ks.empty() ? "-" : ks,
           format_scalar(r.closed, c.precision), fmt_res(r.residual)});
  }
  t.print(std::cout);
  return rows;
}

int cmd_lens(const RunConfig& c, long p, long q, const std::vector<long>& other) {
  Engine eng = r2_engine(c);
  auto a = print_lens(c, eng, p, q);
  bool ok = std::all_of(a.begin(), a.end(), [](const LensRow& r) { return r.residual < 1e-6; });
  if (other.size() == 2) {
    std::cout << "\n";
    auto b = print_lens(c, eng, other[0], other[1]);
    ok = ok && std::all_of(b.begin(), b.end(), [](const LensRow& r) { return r.residual < 1e-6; });
    std::cout << "\n" << (lens_distinguished(a, b) ? "distinguished" : "not distinguished") << "\n";
  } else if (!other.empty()) {
    throw Error("--compare takes two integers");
  }
  return ok ? 0 : 4;
}

template <class F>
void for_each_presentation(const Source& s, F f) {
  if (!no_input(s)) {
    std::string label;
    SurgeryTriple t = load_triple(s, 2, &label);
    f(label, t);
    return;
  }
  for (const auto& m : manifold_catalog())
    for (const auto& p : m.presentations) {
      if (!p.empty_graph) continue;
      const auto samples = m.samples();
      for (std::size_t k = 0; k < samples.size(); ++k)
        f(m.name + " " + p.name + " #" + std::to_string(k), p.build(samples[k], 2));
    }
}

int cmd_n2(const RunConfig& c, const Source& s) {
  Engine eng = r2_engine(c);
  Table t({"input", "omega", "engine", "closed-form", "residual"});
  bool ok = true;
  for_each_presentation(s, [&](const std::string& label, const SurgeryTriple& tr) {
    Scalar e = invariant_N(eng, tr), z = n2_closed_form(tr);
    double res = rel_residual(e, z);
    ok = ok && res < 1e-6;
    t.add({label, fmt_list(tr.omega, 6), format_scalar(e, c.precision), format_scalar(z, c.precision), fmt_res(res)});
  });
  t.print(std::cout);
  return ok ? 0 : 4;
}

int cmd_torsion(const RunConfig& c, const Source& s, const std::vector<long>& charges) {
  Engine eng = r2_engine(c);
  Table t({"input", "omega", "|tau|*2*4^b1", "|N2|", "residual"});
  bool ok = true;
  for_each_presentation(s, [&](const std::string& label, const SurgeryTriple& tr) {
    if (tr.surgery.empty()) return;  // S^3 via u_V carries a graph
    std::vector<long> ch = charges.empty() ? std::vector<long>(tr.surgery.size(), 1) : charges;
    if (ch.size() != tr.surgery.size()) throw Error("--charges needs one value per surgery component");
    Scalar n = invariant_N(eng, tr);
    const double lhs = std::abs(torsion_surgery(tr, ch)) * 2.0 * std::pow(4.0, first_betti(tr));
    const double res = std::abs(lhs - std::abs(n)) / std::abs(n);
    ok = ok && res < 1e-6;
    char a[64], b[64];
    std::snprintf(a, sizeof a, "%.*f", c.precision, lhs);
    std::snprintf(b, sizeof b, "%.*f", c.precision, std::abs(n));
    t.add({label, fmt_list(tr.omega, 6), a, b, fmt_res(res)});
  });
  t.print(std::cout);
  return ok ? 0 : 4;
}

int cmd_cross_check(const RunConfig& c, const Source& s) {
  Engine eng = r2_engine(c);
  Table t({"link", "colors", "engine F'", "from Conway", "residual"});
  bool ok = true;
  auto row = [&](const std::string& label, const SlicedDiagram& d) {
    Wiring w = analyze(d);
    Scalar e = fprime_engine(eng, d), z = fprime_predicted(d);
    double res = std::abs(e - z) / std::max(1.0, std::abs(z));
    ok = ok && res < 1e-8;
    t.add({label, fmt_list(component_alphas(w), 4), format_scalar(e, c.precision), format_scalar(z, c.precision), fmt_res(res)});
  };
  if (!s.file.empty() || !s.link.empty()) {
    row(s.file.empty() ? s.link : s.file, load_diagram(s).diagram);
  } else {
    const std::vector<Scalar> a{0.5, Scalar(0.3, 0.2), 1.4, Scalar(-0.6, 0.1), 0.77};
    for (const auto& e : link_catalog())
      for (std::size_t k = 0; k < a.size(); ++k) {
        std::vector<Color> cols;
        const bool knot = e.components == 1;
        for (std::size_t i = 0; i < e.components; ++i) cols.push_back(Color::typical(a[(k + (knot ? 0 : i)) % a.size()]));
        row(e.name, e.build(cols));
      }
  }
  t.print(std::cout);
  return ok ? 0 : 4;
}

// NSS3M_THREADS caps the worker count; unset or invalid means one worker
unsigned env_threads() {
  const char* v = std::getenv("NSS3M_THREADS");
  if (!v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  return end != v && *end == '\0' && n > 0 ? unsigned(std::min(n, 64L)) : 1;
}

int cmd_selftest(const RunConfig& c, std::vector<int> roots) {
  SelftestOptions o;
  o.threads = env_threads();
  if (c.root_given) roots = {c.root};
  if (!roots.empty()) o.roots = roots;
  o.width_cap = c.width_cap;
  const auto t0 = std::chrono::steady_clock::now();
  auto res = run_selftest(o);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Table t({"suite", "status", "max residual", "threshold", "seconds"});
  bool ok = true;
  for (const auto& s : res) {
    ok = ok && s.passed;
    char sec[32];
    std::snprintf(sec, sizeof sec, "%.2f", s.seconds);
    t.add({s.name, s.passed ? "pass" : "FAIL", fmt_res(s.residual), fmt_res(s.threshold), sec});
  }
  t.print(std::cout);
  for (const auto& s : res)
    for (const auto& n : s.notes) std::cout << "  " << s.name << ": " << n << "\n";
  std::printf("total %.2f s\n", total);
  return ok ? 0 : 1;
}

int cmd_catalog(const RunConfig& c, const std::string& name, const Source& s) {
  if (name.empty()) {
    std::cout << "links:";
    for (const auto& e : link_catalog()) std::cout << " " << e.name;
    std::cout << "\nmanifolds:\n";
    for (const auto& m : manifold_catalog()) {
      std::cout << "  " << m.name << ":";
      for (std::size_t i = 0; i < m.presentations.size(); ++i) std::cout << " [" << i << "] " << m.presentations[i].name;
      std::cout << "\n";
    }
    return 0;
  }
  const int r = c.root_given ? c.root : 0;
  for (const auto& e : link_catalog())
    if (e.name == name) {
      SlicedDiagram d = catalog_link(name, scalar_arg(s.alpha, "--alpha"));
      d.root = r;
      std::cout << print_diagram(d);
      return 0;
    }
  Source m = s;
  m.manifold = name;
  SurgeryTriple t = load_triple(m, r ? r : 2);
  t.diagram.root = r;
  std::cout << print_triple(t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-semisimple quantum invariants of 3-manifolds from U_q^H(sl2)"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  auto* root_opt = app.add_option("--root", cfg.root, "root of unity order r (q = exp(i pi / r))")->check(CLI::Range(2, 64));
  app.add_option("--tol", cfg.tol, "scalarness tolerance")->check(CLI::PositiveNumber);
  app.add_option("--width-cap", cfg.width_cap, "maximum tensor width during evaluation")->check(CLI::Range(1, 64));
  app.add_option("--precision", cfg.precision, "printed decimal digits")->check(CLI::Range(1, 15));
  app.add_flag("--report", cfg.report, "extra detail (invariant)");

  Source src;
  auto add_input = [&](CLI::App* sc, bool link, bool manifold) {
    sc->add_option("file", src.file, "diagram text file");
    if (link) {
      sc->add_option("--link", src.link, "catalog link instead of a file");
      sc->add_option("--alpha", src.alpha, "color of every component of a catalog link");
    }
    if (manifold) {
      sc->add_option("--manifold", src.manifold, "catalog manifold instead of a file");
      sc->add_option("--presentation", src.presentation, "presentation index within the catalog entry");
      sc->add_option("--sample", src.sample, "degree sample index within the catalog entry");
      sc->add_option("--omega", src.omega, "degrees of the surgery components")->delimiter(',');
    }
  };

  auto* eval = app.add_subcommand("eval", "evaluate F (closed) or F' (with a cut arc)");
  add_input(eval, true, false);
  eval->add_option("--cut", src.cut, "cut arc as level,pos, 'auto' or 'none'");

  std::string variant = "N", aux = "0.37";
  auto* inv = app.add_subcommand("invariant", "surgery invariant N or N0");
  add_input(inv, false, true);
  inv->add_option("--variant", variant, "N or N0")->check(CLI::IsMember({"N", "N0"}));
  inv->add_option("--aux", aux, "auxiliary typical color of N0");

  auto* n0 = app.add_subcommand("n0", "invariant N0");
  add_input(n0, false, true);
  n0->add_option("--aux", aux, "auxiliary typical color");

  auto* alex = app.add_subcommand("alexander", "Fox-calculus Alexander polynomial and Conway function");
  add_input(alex, true, false);

  long lp = 0, lq = 0;
  std::vector<long> compare;
  auto* lens = app.add_subcommand("lens", "lens space values at r=2 against the closed form");
  lens->add_option("p", lp)->required();
  lens->add_option("q", lq)->required();
  lens->add_option("--compare", compare, "second lens space p q")->expected(2);

  auto* n2 = app.add_subcommand("n2", "r=2 invariant against its closed form");
  add_input(n2, false, true);

  std::vector<long> charges;
  auto* tor = app.add_subcommand("torsion", "torsion modulus identity at r=2");
  add_input(tor, false, true);
  tor->add_option("--charges", charges, "charge vector, one entry per surgery component")->delimiter(',');

  auto* cross = app.add_subcommand("cross-check", "F' against the Conway function at r=2");
  add_input(cross, true, false);

  std::vector<int> roots;
  auto* st = app.add_subcommand("selftest", "run the property suites");
  st->add_option("--roots", roots, "roots to test (default 2,3,4,5)")->delimiter(',');

  std::string cat_name;
  auto* cat = app.add_subcommand("catalog", "list catalog entries or print one in the diagram text format");
  cat->add_option("name", cat_name);
  cat->add_option("--alpha", src.alpha, "color of a catalog link");
  cat->add_option("--presentation", src.presentation, "presentation index");
  cat->add_option("--sample", src.sample, "sample index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.root_given = root_opt->count() > 0;

  try {
    if (*eval) return cmd_eval(cfg, src);
    if (*inv) return cmd_invariant(cfg, src, variant, aux);
    if (*n0) return cmd_invariant(cfg, src, "N0", aux);
    if (*alex) return cmd_alexander(cfg, src);
    if (*lens) return cmd_lens(cfg, lp, lq, compare);
    if (*n2) return cmd_n2(cfg, src);
    if (*tor) return cmd_torsion(cfg, src, charges);
    if (*cross) return cmd_cross_check(cfg, src);
    if (*st) return cmd_selftest(cfg, roots);
    if (*cat) return cmd_catalog(cfg, cat_name, src);
  } catch (const NonComputableError& e) {
    std::cerr << "non-computable: " << e.what() << "\n";
    return 3;
  } catch (const DefectError& e) {
    std::cerr << "numeric defect: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
