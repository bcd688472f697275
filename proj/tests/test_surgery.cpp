#include <gtest/gtest.h>

#include <nss3m/catalog.hpp>
#include <random>

using namespace nss3m;

namespace {
double rel(Scalar a, Scalar b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

SurgeryTriple framed_unknot(int f, Scalar omega) {
  SurgeryTriple s;
  s.diagram = unknot(Color::typical(0.5), f, "L1");
  s.surgery = {"L1"};
  s.omega = {omega};
  return s;
}
}  // namespace

TEST(KirbyColor, RepresentativesAtRootTwo) {
  RootData rd(2);
  KirbyColor k = kirby_color(rd, 1.5);
  ASSERT_EQ(k.terms.size(), 2u);
  EXPECT_LT(std::abs(k.terms[0].second.alpha - 0.5), 1e-14);
  EXPECT_LT(std::abs(k.terms[1].second.alpha - 2.5), 1e-14);
  EXPECT_LT(std::abs(k.terms[0].first - mod_dim(rd, 0.5)), 1e-14);
  EXPECT_LT(std::abs(k.terms[1].first - mod_dim(rd, 2.5)), 1e-14);
  EXPECT_THROW(kirby_color(rd, 1.0), NonComputableError);
}

TEST(Triple, Validation) {
  RootData rd(2);
  EXPECT_TRUE(validate_triple(rd, framed_unknot(0, 0.5)).empty());
  EXPECT_TRUE(is_computable(rd, framed_unknot(0, 0.5)));
  auto bad = validate_triple(rd, framed_unknot(1, 0.5));
  ASSERT_FALSE(bad.empty());
  EXPECT_NE(bad[0].find("cocycle violated at component 1"), std::string::npos);
  EXPECT_TRUE(is_computable(rd, s3_with_unknot(Color::typical(0.3))));
  EXPECT_FALSE(is_computable(rd, framed_unknot(0, 1.0)));
  EXPECT_FALSE(is_computable(rd, SurgeryTriple{}));
}

TEST(Delta, IndependentOfPattern) {
  for (int r : {2, 3, 5}) {
    Engine eng{RootData(r)};
    Scalar a = delta_pattern(eng, 0.5, +1), b = delta_pattern(eng, 3.0 / 7.0, +1);
    EXPECT_LT(rel(a, b), 1e-8) << "r=" << r;
    EXPECT_LT(delta_pm_raw(eng).spread, 1e-8) << "r=" << r;
  }
}

TEST(Delta, RegressionValues) {
  // minus is the conjugate of plus; values recorded from the engine
  struct Row {
    int r;
    Scalar plus;
  };
  for (Row row : {Row{2, {0, 4}}, Row{3, {0, 3 * std::sqrt(3.0)}}, Row{5, {-9.0450849719, -6.5716389004}}}) {
    Engine eng{RootData(row.r)};
    DeltaPM d = delta_pm(eng);
    EXPECT_LT(std::abs(d.plus - row.plus), 1e-8) << "r=" << row.r << " got " << d.plus;
    EXPECT_LT(std::abs(d.minus - std::conj(d.plus)), 1e-8) << "r=" << row.r;
  }
}

TEST(Delta, DegenerateAtFour) {
  Engine eng{RootData(4)};
  EXPECT_FALSE(delta_pm_raw(eng).nondegenerate());
  EXPECT_THROW(delta_pm(eng), DefectError);
}

TEST(Invariant, GraphOnlyGivesModifiedDimension) {
  for (int r : {2, 3, 5}) {
    RootData rd(r);
    Engine eng(rd);
    Scalar a(0.37, 0.05);
    EXPECT_LT(rel(invariant_N(eng, s3_with_unknot(Color::typical(a))), mod_dim(rd, a)), 1e-10);
  }
}

TEST(Invariant, S1xS2ClosedForm) {
  Engine eng(RootData(2));
  for (double a : {0.5, 2.0 / 3.0, 0.3, 1.4}) {
    double want = 2.0 / std::pow(std::sin(kPi * a / 2.0), 2);
    EXPECT_LT(rel(invariant_N(eng, framed_unknot(0, a)), want), 1e-10) << a;
  }
  EXPECT_LT(std::abs(invariant_N(eng, framed_unknot(0, 0.5)) - 4.0), 1e-10);
}

TEST(Invariant, NonComputableRejected) {
  Engine eng(RootData(2));
  EXPECT_THROW(invariant_N(eng, framed_unknot(1, 0.5)), NonComputableError);
  EXPECT_THROW(invariant_N(eng, framed_unknot(0, 1.0)), NonComputableError);
  EXPECT_THROW(invariant_N(eng, SurgeryTriple{}), NonComputableError);
}

TEST(Invariant, ReportFields) {
  Engine eng(RootData(3));
  auto s = find_manifold("L(5,2)").presentations[0].build(find_manifold("L(5,2)").samples()[0], 3);
  auto rep = invariant_N_report(eng, s);
  EXPECT_EQ(rep.link.sigma_plus, 2);
  EXPECT_EQ(rep.link.sigma_minus, 0);
  EXPECT_EQ(rep.terms, 9u);
  EXPECT_EQ(rep.link.matrix, (std::vector<std::vector<int>>{{3, 1}, {1, 2}}));
}

TEST(Invariant, PresentationIndependence) {
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    for (const auto& m : manifold_catalog()) {
      if (m.presentations.size() < 2) continue;
      for (const auto& x : m.samples()) {
        Scalar ref = invariant_N(eng, m.presentations[0].build(x, r));
        for (std::size_t p = 1; p < m.presentations.size(); ++p)
          EXPECT_LT(rel_err(invariant_N(eng, m.presentations[p].build(x, r)), ref), 1e-6)
              << m.name << " " << m.presentations[p].name << " r=" << r;
      }
    }
  }
}

TEST(Invariant, RepresentativeShift) {
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    InvariantOptions shifted;
    shifted.rep_shift = 1;
    for (const auto& m : manifold_catalog())
      for (const auto& p : m.presentations) {
        auto s = p.build(m.samples()[0], r);
        if (s.surgery.empty()) continue;
        EXPECT_LT(rel_err(invariant_N(eng, s, shifted), invariant_N(eng, s)), 1e-8) << m.name << " " << p.name;
      }
  }
}

TEST(Kirby, SlideFamilies) {
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    Color u = Color::typical(Scalar(0.31, 0.12));
    for (std::size_t k = 0; k < slide_family_count(); ++k) {
      auto [pre, post] = slide_fprimes(eng, slide_family(k, u), u);
      EXPECT_LT(rel(pre, post), 1e-8) << slide_family(k, u).description << " r=" << r;
    }
  }
}

TEST(Kirby, BlowUpMultipliesByDelta) {
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    DeltaPM dp = delta_pm(eng);
    for (const char* nm : {"unknot", "trefoil", "hopf+", "figure-eight"}) {
      SlicedDiagram d = catalog_link(nm, Scalar(0.27, -0.1));
      Scalar f = eng.modified_eval(d, {1, 0});
      EXPECT_LT(rel(blowup_fprime(eng, d, {1, 0}, +1), dp.plus * f), 1e-8) << nm;
      EXPECT_LT(rel(blowup_fprime(eng, d, {1, 0}, -1), dp.minus * f), 1e-8) << nm;
    }
  }
}

TEST(Stabilization, MultipliesByPairing) {
  // stabilize an arc of the graph u on each S^3 presentation
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    Color v = Color::typical(Scalar(0.4, 0.1));
    const auto& m = find_manifold("S3");
    for (const auto& p : m.presentations)
      for (const auto& x : m.samples()) {
        auto s = p.build(x, r);
        Wiring w = analyze(s.diagram);
        ArcRef arc = *first_arc(w, w.component_index("u"));
        SurgeryTriple h = h_stabilize(eng.root(), s, arc, v);
        Scalar want = pairing_H(eng, v, w.words[arc.level][arc.pos].color) * invariant_N(eng, s);
        EXPECT_LT(rel_err(invariant_N(eng, h), want), 1e-8) << p.name << " r=" << r;
      }
  }
}

TEST(Stabilization, CutIndependent) {
  Engine eng(RootData(2));
  SlicedDiagram d = meridian_insert(catalog_link("trefoil", 0.3), {1, 0}, Color::typical(0.45), 0, 0, "H");
  Wiring w = analyze(d);
  Scalar ref = eng.modified_eval(d, {1, 0});
  for (std::size_t h = 1; h + 1 < w.words.size(); ++h)
    for (std::size_t i = 0; i < w.words[h].size(); ++i) EXPECT_LT(rel(eng.modified_eval(d, {h, i}), ref), 1e-8);
}

TEST(N0, Values) {
  for (int r : {2, 3}) {
    Engine eng{RootData(r)};
    for (Scalar v : {Scalar(0.37), Scalar(0.25, 0.1), Scalar(-1.3)}) {
      Color c = Color::typical(v);
      EXPECT_LT(std::abs(invariant_N0(eng, SurgeryTriple{}, c) - 1.0), 1e-8);
      // computable triples give zero
      EXPECT_LT(std::abs(invariant_N0(eng, framed_unknot(0, 0.5), c)), 1e-8);
      EXPECT_LT(std::abs(invariant_N0(eng, s3_with_unknot(Color::typical(0.6)), c)), 1e-8);
      // non-computable, nonzero and V-independent
      SurgeryTriple eps;
      eps.diagram = unknot(Color::periodic(1), 0, "E");
      EXPECT_LT(std::abs(invariant_N0(eng, eps, c) - 1.0), 1e-8);
    }
  }
}

TEST(ConnectedSum, WithGraphTripleVanishes) {
  // a typical-colored split summand kills N
  Engine eng(RootData(2));
  auto s = connected_sum(framed_unknot(0, 0.5), s3_with_unknot(Color::typical(0.3)));
  EXPECT_EQ(s.surgery.size(), 1u);
  EXPECT_LT(std::abs(invariant_N(eng, s)), 1e-8);
}
