#include <gtest/gtest.h>

#include <nss3m/selftest.hpp>
#include <random>

using namespace nss3m;

namespace {
double rel(Scalar a, Scalar b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Scalar random_typical(std::mt19937& g) {
  std::uniform_real_distribution<double> re(-1.7, 1.7), im(-0.3, 0.3);
  for (;;) {
    Scalar a(re(g), im(g));
    if (std::abs(a.imag()) > 0.02 || std::abs(std::remainder(a.real(), 1.0)) > 0.05) return a;
  }
}

SurgeryTriple s1xs2(Scalar a) { return find_manifold("S1xS2").presentations[0].build({a}, 2); }

}  // namespace

TEST(FPrime, Examples) {
  Engine eng(RootData(2));
  EXPECT_LT(std::abs(fprime_predicted(unknot(Color::typical(0.5))) + std::sqrt(2.0)), 1e-12);
  EXPECT_LT(std::abs(fprime_engine(eng, unknot(Color::typical(0.5))) + std::sqrt(2.0)), 1e-12);
  SlicedDiagram h = hopf(Color::typical(0.5), Color::typical(1.0 / 3.0), +1);
  EXPECT_LT(rel(fprime_engine(eng, h), fprime_predicted(h)), 1e-8);
  SlicedDiagram t = braid_closure({1, 1, 1}, {Color::typical(0.5), Color::typical(0.5)});
  EXPECT_EQ(analyze(t).framing(0), 3);
  EXPECT_LT(rel(fprime_engine(eng, t), fprime_predicted(t)), 1e-8);
}

TEST(FPrime, MatchesConwayOnCatalog) {
  Engine eng(RootData(2));
  std::mt19937 g(11);
  for (const auto& e : link_catalog())
    for (int k = 0; k < 6; ++k) {
      std::vector<Color> cols;
      for (std::size_t i = 0; i < e.components; ++i) cols.push_back(Color::typical(random_typical(g)));
      SlicedDiagram d = e.build(cols);
      EXPECT_LT(rel(fprime_engine(eng, d), fprime_predicted(d)), 1e-8) << e.name;
    }
}

TEST(FPrime, FramedAndMixedLinks) {
  Engine eng(RootData(2));
  for (int f : {-2, 1, 3}) {
    SlicedDiagram u = unknot(Color::typical(Scalar(0.3, 0.1)), f);
    EXPECT_LT(rel(fprime_engine(eng, u), fprime_predicted(u)), 1e-8) << f;
  }
  SlicedDiagram c = chain_link({0, 1, -1}, {Color::typical(0.5), Color::typical(1.0 / 3.0), Color::typical(Scalar(0.2, 0.1))});
  EXPECT_LT(rel(fprime_engine(eng, c), fprime_predicted(c)), 1e-8);
}

TEST(N2, S1xS2) {
  EXPECT_LT(std::abs(n2_closed_form(s1xs2(0.5)) - 4.0), 1e-10);
  EXPECT_LT(std::abs(n2_closed_form(s1xs2(2.0 / 3.0)) - 8.0 / 3.0), 1e-10);
  for (Scalar a : {Scalar(0.3, 0.2), Scalar(1.4)}) {
    Scalar s = std::sin(kPi * a / 2.0);
    EXPECT_LT(rel(n2_closed_form(s1xs2(a)), 2.0 / (s * s)), 1e-10);
  }
}

TEST(N2, ChainMinusTwo) {
  // linking matrix {{-2,1},{1,-2}}, det 3: alpha = 2n/3 with A alpha even
  Engine eng(RootData(2));
  auto lk = std::vector<std::vector<long>>{{-2, 1}, {1, -2}};
  auto oms = admissible_omegas(lk);
  ASSERT_FALSE(oms.empty());
  for (const auto& om : oms) {
    SurgeryTriple s = detail::chain_triple({-2, -2}, om);
    EXPECT_LT(rel_err(invariant_N(eng, s), n2_closed_form(s)), 1e-6);
  }
}

TEST(N2, MatchesEngineOnCatalog) {
  Engine eng(RootData(2));
  std::size_t seen = 0;
  for (const auto& m : manifold_catalog())
    for (const auto& p : m.presentations) {
      if (!p.empty_graph) continue;
      for (const auto& x : m.samples()) {
        auto s = p.build(x, 2);
        EXPECT_LT(rel_err(invariant_N(eng, s), n2_closed_form(s)), 1e-6) << m.name << " " << p.name;
        ++seen;
      }
    }
  EXPECT_GE(seen, 20u);
}

TEST(N2, RejectsGraphs) {
  EXPECT_THROW(n2_closed_form(s3_with_unknot(Color::typical(0.3))), Error);
  EXPECT_THROW(n2_closed_form(s1xs2(1.0)), NonComputableError);
  EXPECT_THROW(n2_closed_form(SurgeryTriple{}), NonComputableError);
}

TEST(Torsion, ModulusIdentity) {
  Engine eng(RootData(2));
  for (const auto& m : manifold_catalog()) {
    if (m.name == "S3") continue;
    for (const auto& x : m.samples()) {
      auto s = m.presentations[0].build(x, 2);
      Scalar n = invariant_N(eng, s);
      const int b1 = first_betti(s);
      Scalar t = torsion_surgery(s, std::vector<long>(s.surgery.size(), 1));
      Scalar ratio = t * 2.0 * std::pow(4.0, b1) / n;
      EXPECT_LT(std::abs(std::abs(ratio) - 1.0), 1e-6) << m.name;
    }
  }
  EXPECT_EQ(first_betti(s1xs2(0.5)), 1);
  EXPECT_EQ(first_betti(find_manifold("L(5,1)").presentations[0].build(detail::lens_samples(5, 1)[0], 2)), 0);
}

TEST(Torsion, AnyChargesAtLensSpace) {
  Engine eng(RootData(2));
  auto s = find_manifold("L(5,1)").presentations[0].build(detail::lens_samples(5, 1)[0], 2);
  Scalar n = invariant_N(eng, s);
  for (long k = -3; k <= 3; k += 2) EXPECT_LT(std::abs(std::abs(torsion_surgery(s, {k})) - std::abs(n) / 2.0), 1e-6 * std::abs(n));
}

TEST(Torsion, ChargeShift) {
  auto s = find_manifold("L(5,2)").presentations[0].build(detail::lens_samples(5, 2)[0], 2);
  Scalar base = torsion_surgery(s, {1, 1});
  Scalar shifted = torsion_surgery(s, {3, 1});
  EXPECT_LT(rel(shifted / base, ipow(2.0 * s.omega[0])), 1e-10);
  shifted = torsion_surgery(s, {1, 3});
  EXPECT_LT(rel(shifted / base, ipow(2.0 * s.omega[1])), 1e-10);
  EXPECT_THROW(torsion_surgery(s, {1}), Error);
}

TEST(Lens, ChainAndDeterminant) {
  auto lp = lens_presentation(5, 2);
  EXPECT_EQ(lp.spec.chain, (std::vector<long>{3, 2}));
  EXPECT_EQ(std::abs(lp.det), 5);
  EXPECT_EQ(lens_presentation(7, 3).spec.chain, (std::vector<long>{3, 2, 2}));
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {7, 2}, {11, 4}, {13, 5}}) {
    auto x = lens_presentation(p, q);
    EXPECT_EQ(std::abs(x.det), p);
    // evaluate the continued fraction back
    double v = double(x.spec.chain.back());
    for (std::size_t i = x.spec.chain.size() - 1; i-- > 0;) v = double(x.spec.chain[i]) - 1.0 / v;
    EXPECT_NEAR(v, double(p) / double(q), 1e-12);
  }
  EXPECT_THROW(lens_spec(6, 4), Error);
  EXPECT_THROW(lens_spec(3, 5), Error);
}

TEST(Lens, OmegasAreAdmissible) {
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {5, 2}, {7, 2}}) {
    auto lp = lens_presentation(p, q);
    ASSERT_FALSE(lp.omegas.empty());
    for (const auto& om : lp.omegas) EXPECT_TRUE(is_computable(RootData(2), with_omega(lp.base, om)));
  }
}

TEST(Lens, MatchesClosedForm) {
  Engine eng(RootData(2));
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {5, 2}, {7, 1}, {7, 2}}) {
    auto lp = lens_presentation(p, q);
    for (const auto& om : lp.omegas) {
      Scalar n = invariant_N(eng, with_omega(lp.base, om));
      EXPECT_FALSE(lens_matches(n, p, q).empty()) << "L(" << p << "," << q << ")";
    }
  }
}

TEST(Lens, MatchIsStableUnderSignFlip) {
  Engine eng(RootData(2));
  for (auto [p, q] : std::vector<std::pair<long, long>>{{5, 1}, {5, 2}, {7, 2}}) {
    auto lp = lens_presentation(p, q);
    for (const auto& om : lp.omegas) {
      std::vector<Scalar> neg;
      for (auto a : om) neg.push_back(-a);
      auto a = lens_matches(invariant_N(eng, with_omega(lp.base, om)), p, q);
      auto b = lens_matches(invariant_N(eng, with_omega(lp.base, neg)), p, q);
      EXPECT_FALSE(a.empty());
      EXPECT_EQ(a, b) << "L(" << p << "," << q << ")";
    }
  }
}

TEST(Lens, DistinguishesSevenOneFromSevenTwo) {
  Engine eng(RootData(2));
  EXPECT_TRUE(lens_distinguished(lens_table(eng, 7, 1), lens_table(eng, 7, 2)));
  EXPECT_FALSE(lens_distinguished(lens_table(eng, 7, 2), lens_table(eng, 7, 2)));
}

TEST(Lens, PrintedExponentDoesNotMatch) {
  // the display with k^2 p/q in the exponent fails where k^2 q/p succeeds
  Engine eng(RootData(2));
  auto lp = lens_presentation(5, 2);
  std::size_t misses = 0;
  for (const auto& om : lp.omegas) {
    Scalar n = invariant_N(eng, with_omega(lp.base, om));
    if (lens_matches(n, 5, 2, 1e-6, true).empty()) ++misses;
  }
  EXPECT_EQ(misses, lp.omegas.size());
}

TEST(Lens, ClosedFormGuards) {
  EXPECT_THROW(lens_closed_form(5, 1, 5), Error);
  EXPECT_THROW(lens_closed_form(5, 1, 0), Error);
  // k -> -k leaves the value unchanged
  EXPECT_LT(rel(lens_closed_form(7, 2, 3), lens_closed_form(7, 2, -3)), 1e-12);
}

TEST(CG, Equivariance) {
  std::mt19937 g(5);
  int checked = 0;
  while (checked < 10) {
    Scalar a = random_typical(g), b = random_typical(g);
    Scalar c = double(checked % 2 ? -1 : 1) - a - b;
    if (std::abs(c.imag()) < 0.02 && std::abs(std::remainder(c.real() - 1.0, 2.0)) < 0.05) continue;
    EXPECT_LT(cg_equivariance_residual(a, b, c), 1e-8) << a << " " << b << " " << c;
    ++checked;
  }
}

TEST(CG, SupportConstraint) {
  const Scalar a(0.3, 0.2), b(0.45, 0);
  for (int sgn : {+1, -1}) {
    const Scalar c = double(sgn) - a - b;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int h = 0; h < 2; ++h)
          if (2 * (j + k - h) != sgn + 1) {
            EXPECT_EQ(cg_coefficient(a, b, c, j, k, h), Scalar(0)) << j << k << h;
          }
  }
  EXPECT_GT(cg_vertex(a, b, 1.0 - a - b).m.norm(), 1e-6);
}

TEST(CG, Inadmissible) {
  EXPECT_THROW(cg_vertex(0.3, 0.4, 0.5), DiagramError);
  EXPECT_THROW(cg_vertex(1.0, 0.4, -0.4), DiagramError);
  EXPECT_THROW(w_iso(3.0), DiagramError);
}

TEST(CG, WIsoIntertwines) {
  std::mt19937 g(6);
  for (int k = 0; k < 10; ++k) EXPECT_LT(w_iso_residual(random_typical(g)), 1e-8);
}

TEST(TGamma, ThetaAndTetrahedron) {
  Engine eng(RootData(2));
  for (auto place : {WPlacement::AfterSource, WPlacement::BeforeTarget}) {
    for (auto [d, want] : {std::pair{t_gamma(theta_graph(0.3, 0.45), place), Scalar(1.0)},
                           std::pair{t_gamma(tetrahedron_graph(0.3, 0.45, 0.21), place), Scalar(-0.718126)}}) {
      Wiring w = analyze(d);
      ASSERT_TRUE(w.ok());
      Scalar ref = eng.modified_eval(d, {1, 0});
      // regression value, six digits
      EXPECT_LT(std::abs(ref - want), 1e-6);
      for (std::size_t h = 1; h + 1 < w.words.size(); ++h)
        for (std::size_t i = 0; i < w.words[h].size(); ++i) EXPECT_LT(rel(eng.modified_eval(d, {h, i}), ref), 1e-8);
    }
  }
}

TEST(TGamma, ReslicingInvariant) {
  Engine eng(RootData(2));
  for (const auto& g : {theta_graph(Scalar(0.2, 0.1), 0.5, -1), tetrahedron_graph(Scalar(0.35, -0.05), 0.4, 0.6)}) {
    Scalar a = eng.modified_eval(t_gamma(g, WPlacement::AfterSource), {1, 0});
    SlicedDiagram d = t_gamma(g, WPlacement::BeforeTarget);
    Scalar b = eng.modified_eval(d, {1, 0});
    EXPECT_LT(rel(a, b), 1e-8);
    // an extra identity level and a twist pair on one edge
    d.slices.insert(d.slices.begin() + 1, {SliceEvent::identity(0), SliceEvent::twist(0, +1), SliceEvent::twist(0, -1)});
    EXPECT_LT(rel(eng.modified_eval(d, {1, 0}), b), 1e-8);
  }
}

TEST(TGamma, RejectsBadGraphs) {
  TrivalentGraph g = theta_graph(0.3, 0.45);
  g.color["z"] = 0.5;
  EXPECT_THROW(t_gamma(g), DiagramError);
  TrivalentGraph open;
  open.color = {{"x", 0.3}, {"y", 0.45}, {"z", 0.25}};
  open.vertices = {{0, 0, {"x", "y", "z"}}};
  EXPECT_THROW(t_gamma(open), DiagramError);
}
