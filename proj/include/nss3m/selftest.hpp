// Property suites shared by the CLI selftest command.
#pragma once

#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "catalog.hpp"

namespace nss3m {

struct SuiteResult {
  std::string name;
  bool passed = true;
  double residual = 0;   // worst measured residual
  double threshold = 0;  // pass iff residual < threshold (and no failure note)
  std::vector<std::string> notes;
  double seconds = 0;
};

struct SelftestOptions {
  std::vector<int> roots{2, 3, 4, 5};
  std::size_t width_cap = 8;
  unsigned seed = 20240601;
  unsigned threads = 1;  // suites run concurrently, results keep their order
};

namespace detail {
inline Scalar random_typical(std::mt19937& g) {
  std::uniform_real_distribution<double> re(-1.7, 1.7), im(-0.4, 0.4);
  Scalar a;
  do {
    a = {re(g), im(g)};
  } while (std::abs(a.real() - std::round(a.real())) < 0.05);
  return a;
}

inline double rel(Scalar a, Scalar b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

inline bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

struct Meter {
  SuiteResult& s;
  void see(double v, const std::string& where) {
    if (!(v < s.threshold)) s.notes.push_back(where + ": residual " + std::to_string(v));
    if (std::isnan(v)) v = 1e300;
    s.residual = std::max(s.residual, v);
  }
  void fail(const std::string& why) { s.notes.push_back(why); }
};

template <class F>
SuiteResult run_suite(const std::string& name, double threshold, F body) {
  SuiteResult s;
  s.name = name;
  s.threshold = threshold;
  const auto t0 = std::chrono::steady_clock::now();
  Meter m{s};
  try {
    body(m);
  } catch (const std::exception& e) {
    s.notes.push_back(std::string("exception: ") + e.what());
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.passed = s.notes.empty() && s.residual < threshold;
  return s;
}
}  // namespace detail

inline SuiteResult suite_relations(const SelftestOptions& o) {
  return detail::run_suite("relations", 1e-8, [&](detail::Meter& m) {
    std::mt19937 g(o.seed);
    for (int r : o.roots) {
      RootData rd(r);
      for (int k = 0; k < 10; ++k) {
        auto v = typical_module(rd, detail::random_typical(g));
        m.see(relation_residuals(rd, v).max(), "r=" + std::to_string(r));
        m.see(relation_residuals(rd, dual_module(rd, v)).max(), "dual r=" + std::to_string(r));
      }
      m.see(relation_residuals(rd, periodic_module(rd, 1)).max(), "eps r=" + std::to_string(r));
    }
  });
}

inline SuiteResult suite_ribbon(const SelftestOptions& o) {
  return detail::run_suite("ribbon", 1e-8, [&](detail::Meter& m) {
    std::mt19937 g(o.seed + 1);
    for (int r : {2, 3}) {
      if (!detail::has(o.roots, r)) continue;
      RootData rd(r);
      for (int k = 0; k < 3; ++k) {
        auto v = typical_module(rd, detail::random_typical(g));
        auto w = typical_module(rd, detail::random_typical(g));
        auto u = typical_module(rd, detail::random_typical(g));
        const Mat iv = Mat::Identity(Eigen::Index(v.dim()), Eigen::Index(v.dim()));
        const Mat iw = Mat::Identity(Eigen::Index(w.dim()), Eigen::Index(w.dim()));
        const Mat iu = Mat::Identity(Eigen::Index(u.dim()), Eigen::Index(u.dim()));
        // (c_vw x 1)(1 x c_vu)... Yang-Baxter on V(x)W(x)U
        Mat lhs = kron(braiding(rd, w, u), iv) * kron(iw, braiding(rd, v, u)) * kron(braiding(rd, v, w), iu);
        Mat rhs = kron(iu, braiding(rd, v, w)) * kron(braiding(rd, v, u), iw) * kron(iv, braiding(rd, w, u));
        m.see((lhs - rhs).norm() / std::max(1.0, lhs.norm()), "Yang-Baxter");
        auto vw = tensor_module(rd, v, w);
        Mat t = twist(rd, vw);
        Mat c2 = braiding(rd, w, v) * braiding(rd, v, w) * kron(twist(rd, v), twist(rd, w));
        m.see((t - c2).norm() / std::max(1.0, t.norm()), "twist compatibility");
        DualData dd = dual_data(rd, v);
        const Mat id = iv;
        const Mat idd = Mat::Identity(Eigen::Index(v.dim()), Eigen::Index(v.dim()));
        m.see((kron(id, dd.d) * kron(dd.b, id) - id).norm(), "zig-zag b,d on V");
        m.see((kron(dd.d, idd) * kron(idd, dd.b) - idd).norm(), "zig-zag b,d on V*");
        m.see((kron(dd.d_prime, id) * kron(id, dd.b_prime) - id).norm(), "zig-zag b',d' on V");
        m.see((kron(idd, dd.d_prime) * kron(dd.b_prime, idd) - idd).norm(), "zig-zag b',d' on V*");
      }
    }
  });
}

inline SuiteResult suite_moddim(const SelftestOptions& o) {
  return detail::run_suite("modified-dimension", 1e-9, [&](detail::Meter& m) {
    std::mt19937 g(o.seed + 2);
    for (int r : o.roots) {
      RootData rd(r);
      Engine eng(rd, o.width_cap);
      for (int k = 0; k < 20; ++k) {
        Scalar a = detail::random_typical(g);
        m.see(detail::rel(mod_dim_product(rd, a), mod_dim_sine(rd, a)), "product vs sine");
        m.see(detail::rel(mod_dim(rd, a + 2.0 * double(r)), mod_dim(rd, a)), "periodicity");
        if (k < 5) m.see(std::abs(eng.closed_value(unknot(Color::typical(a)))), "quantum dimension");
      }
    }
  });
}

inline SuiteResult suite_ambidexterity(const SelftestOptions& o) {
  return detail::run_suite("ambidexterity", 1e-8, [&](detail::Meter& m) {
    std::mt19937 g(o.seed + 3);
    for (int r : {2, 3}) {
      if (!detail::has(o.roots, r)) continue;
      Engine eng(RootData(r), o.width_cap);
      for (const auto& e : link_catalog()) {
        std::vector<Color> cols;
        for (std::size_t i = 0; i < e.components; ++i) cols.push_back(Color::typical(detail::random_typical(g)));
        if (e.name == "trefoil" || e.name == "figure-eight") cols.assign(1, cols[0]);
        SlicedDiagram d = e.build(cols);
        Wiring w = analyze(d);
        std::optional<Scalar> ref;
        for (std::size_t h = 0; h < w.words.size(); ++h)
          for (std::size_t i = 0; i < w.words[h].size(); ++i) {
            Scalar v = eng.modified_eval(d, {h, i});
            if (!ref) ref = v;
            m.see(detail::rel(v, *ref), e.name + " r=" + std::to_string(r));
          }
      }
    }
    if (detail::has(o.roots, 2)) {
      Engine eng(RootData(2), o.width_cap);
      for (const auto& tg : {theta_graph(0.3, 0.45), tetrahedron_graph(0.3, 0.45, 0.21)}) {
        SlicedDiagram d = t_gamma(tg);
        Wiring w = analyze(d);
        Scalar ref = eng.modified_eval(d, {1, 0});
        for (std::size_t h = 1; h + 1 < w.words.size(); ++h)
          for (std::size_t i = 0; i < w.words[h].size(); ++i) m.see(detail::rel(eng.modified_eval(d, {h, i}), ref), "T_Gamma");
        m.see(detail::rel(eng.modified_eval(t_gamma(tg, WPlacement::BeforeTarget), {1, 0}), ref), "T_Gamma re-sliced");
      }
    }
  });
}

inline SuiteResult suite_kirby(const SelftestOptions& o) {
  return detail::run_suite("kirby", 1e-8, [&](detail::Meter& m) {
    for (int r : o.roots) {
      Engine eng(RootData(r), o.width_cap);
      DeltaPM dp = delta_pm_raw(eng);
      const std::string at = " r=" + std::to_string(r);
      m.see(dp.spread, "Delta spread" + at);
      if (!dp.nondegenerate()) m.fail("Delta+ * Delta- = 0 at r=" + std::to_string(r));
      Color u = Color::typical({0.31, 0.12});
      for (const char* nm : {"unknot", "trefoil", "hopf+"}) {
        SlicedDiagram d = catalog_link(nm, u.alpha);
        Scalar f = eng.modified_eval(d, {1, 0});
        for (int e : {+1, -1})
          m.see(detail::rel(blowup_fprime(eng, d, {1, 0}, e), (e > 0 ? dp.plus : dp.minus) * f), std::string("blow-up ") + nm + at);
      }
      if (r <= 3)
        for (std::size_t k = 0; k < slide_family_count(); ++k) {
          auto [a, b] = slide_fprimes(eng, slide_family(k, u), u);
          m.see(detail::rel(a, b), "slide " + std::to_string(k) + at);
        }
    }
  });
}

inline SuiteResult suite_presentations(const SelftestOptions& o) {
  return detail::run_suite("presentation-independence", 1e-6, [&](detail::Meter& m) {
    for (int r : {2, 3}) {
      if (!detail::has(o.roots, r)) continue;
      Engine eng(RootData(r), o.width_cap);
      for (const auto& man : manifold_catalog()) {
        if (man.presentations.size() < 2) continue;
        for (const auto& x : man.samples()) {
          Scalar ref = invariant_N(eng, man.presentations[0].build(x, r));
          for (std::size_t p = 1; p < man.presentations.size(); ++p)
            m.see(detail::rel(invariant_N(eng, man.presentations[p].build(x, r)), ref), man.name + " r=" + std::to_string(r));
        }
      }
    }
  });
}

inline SuiteResult suite_r2_closed_forms(const SelftestOptions& o) {
  return detail::run_suite("r2-closed-forms", 1e-6, [&](detail::Meter& m) {
    if (!detail::has(o.roots, 2)) return;
    Engine eng(RootData(2), o.width_cap);
    for (const auto& man : manifold_catalog())
      for (const auto& p : man.presentations) {
        if (!p.empty_graph) continue;
        for (const auto& x : man.samples()) {
          auto s = p.build(x, 2);
          m.see(detail::rel(invariant_N(eng, s), n2_closed_form(s)), man.name + " " + p.name);
        }
      }
    std::mt19937 g(o.seed + 4);
    for (const auto& e : link_catalog())
      for (int k = 0; k < 5; ++k) {
        std::vector<Color> cols;
        Scalar a0 = detail::random_typical(g);
        for (std::size_t i = 0; i < e.components; ++i) cols.push_back(Color::typical(i ? detail::random_typical(g) : a0));
        SlicedDiagram d = e.build(cols);
        m.see(detail::rel(fprime_engine(eng, d), fprime_predicted(d)), "F' vs Conway " + e.name);
      }
  });
}

inline SuiteResult suite_torsion(const SelftestOptions& o) {
  return detail::run_suite("torsion-modulus", 1e-6, [&](detail::Meter& m) {
    if (!detail::has(o.roots, 2)) return;
    Engine eng(RootData(2), o.width_cap);
    for (const auto& man : manifold_catalog()) {
      if (man.name == "S3") continue;
      const auto& p = man.presentations[0];
      for (const auto& x : man.samples()) {
        auto s = p.build(x, 2);
        Scalar n = invariant_N(eng, s);
        Scalar t = torsion_surgery(s, std::vector<long>(s.surgery.size(), 1));
        const double lhs = std::abs(t) * 2.0 * std::pow(4.0, first_betti(s));
        m.see(std::abs(lhs - std::abs(n)) / std::abs(n), man.name);
      }
    }
  });
}

struct LensRow {
  std::vector<Scalar> omega;
  Scalar engine, closed;
  std::vector<long> ks;
  double residual;
};

inline std::vector<LensRow> lens_table(const Engine& eng, long p, long q, double tol = 1e-6) {
  auto lp = lens_presentation(p, q);
  std::vector<LensRow> rows;
  for (const auto& om : lp.omegas) {
    LensRow row;
    row.omega = om;
    row.engine = invariant_N(eng, with_omega(lp.base, om));
    row.ks = lens_matches(row.engine, p, q, tol);
    long best = 1;
    double br = 1e300;
    for (long k = 1; k < p; ++k) {
      double e = std::abs(lens_closed_form(p, q, k) - row.engine) / std::abs(row.engine);
      if (e < br) br = e, best = k;
    }
    row.closed = lens_closed_form(p, q, best);
    row.residual = br;
    rows.push_back(row);
  }
  return rows;
}

/// True when no value of one table appears in the other.
inline bool lens_distinguished(const std::vector<LensRow>& a, const std::vector<LensRow>& b, double tol = 1e-6) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (std::abs(x.engine - y.engine) <= tol * std::abs(x.engine)) return false;
  return true;
}

inline SuiteResult suite_lens(const SelftestOptions& o) {
  return detail::run_suite("lens", 1e-6, [&](detail::Meter& m) {
    if (!detail::has(o.roots, 2)) return;
    Engine eng(RootData(2), o.width_cap);
    std::map<std::pair<long, long>, std::vector<LensRow>> t;
    for (auto pq : std::vector<std::pair<long, long>>{{5, 1}, {5, 2}, {7, 1}, {7, 2}}) {
      t[pq] = lens_table(eng, pq.first, pq.second);
      for (const auto& row : t[pq]) m.see(row.residual, "L(" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ")");
    }
    if (!lens_distinguished(t[{7, 1}], t[{7, 2}])) m.fail("L(7,1) and L(7,2) share a value");
  });
}

inline SuiteResult suite_n0(const SelftestOptions& o) {
  return detail::run_suite("n0", 1e-8, [&](detail::Meter& m) {
    for (int r : {2, 3}) {
      if (!detail::has(o.roots, r)) continue;
      Engine eng(RootData(r), o.width_cap);
      for (Scalar v : {Scalar(0.37), Scalar(0.25, 0.1), Scalar(1.3)}) {
        Color c = Color::typical(v);
        m.see(std::abs(invariant_N0(eng, SurgeryTriple{}, c) - 1.0), "N0(S3)");
        for (const auto& man : manifold_catalog()) {
          if (man.name == "S3") continue;
          auto s = man.presentations[0].build(man.samples()[0], r);
          m.see(std::abs(invariant_N0(eng, s, c)), "N0 " + man.name);
        }
      }
    }
  });
}

inline SuiteResult suite_cg(const SelftestOptions& o) {
  return detail::run_suite("clebsch-gordan", 1e-8, [&](detail::Meter& m) {
    if (!detail::has(o.roots, 2)) return;
    std::mt19937 g(o.seed + 5);
    for (int k = 0; k < 10; ++k) {
      Scalar a = detail::random_typical(g), b = detail::random_typical(g);
      int sgn = k % 2 ? -1 : 1;
      Scalar c = double(sgn) - a - b;
      if (detail::odd_integer(c, 0.05)) continue;
      m.see(cg_equivariance_residual(a, b, c), "cg_vertex");
      m.see(w_iso_residual(a), "w_iso");
    }
  });
}

inline std::vector<SuiteResult> run_selftest(const SelftestOptions& o) {
  using Suite = SuiteResult (*)(const SelftestOptions&);
  static constexpr Suite suites[] = {suite_relations,     suite_ribbon,          suite_moddim,    suite_ambidexterity,
                                     suite_kirby,         suite_presentations,   suite_r2_closed_forms,
                                     suite_torsion,       suite_lens,            suite_n0,        suite_cg};
  constexpr std::size_t n = std::size(suites);
  std::vector<SuiteResult> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) out[i] = suites[i](o);
  };
  const unsigned k = std::clamp<unsigned>(o.threads, 1, unsigned(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace nss3m
