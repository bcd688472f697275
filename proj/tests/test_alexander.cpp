#include <gtest/gtest.h>

#include <nss3m/catalog.hpp>

using namespace nss3m;

namespace {
Color c(double a = 0.5) { return Color::typical(a); }

// coefficients of a one-variable Laurent polynomial from lowest to highest degree
std::vector<std::int64_t> coeffs(const LaurentPoly& p) {
  EXPECT_EQ(p.nvars, 1u);
  auto [lo, hi] = p.degree_span(0);
  std::vector<std::int64_t> out;
  for (int d = lo; d <= hi; ++d) {
    auto it = p.terms.find({d});
    out.push_back(it == p.terms.end() ? 0 : it->second);
  }
  return out;
}

// equality up to multiplication by +-t^k
bool equal_up_to_units(const LaurentPoly& p, std::vector<std::int64_t> want) {
  auto got = coeffs(p);
  if (got == want) return true;
  for (auto& x : want) x = -x;
  return got == want;
}

bool is_unit(const LaurentPoly& p) { return p.terms.size() == 1 && std::abs(p.terms.begin()->second) == 1; }

struct Known {
  const char* name;
  SlicedDiagram d;
  std::vector<std::int64_t> conway;  // ascending powers of z
};

// Conway polynomials from standard knot and link tables
std::vector<Known> table() {
  return {
      {"unknot", unknot(c()), {1}},
      {"hopf+", hopf(c(), c(0.3), +1), {0, 1}},
      {"hopf-", hopf(c(), c(0.3), -1), {0, -1}},
      {"trefoil", braid_closure({1, 1, 1}, {c(), c()}), {1, 0, 1}},
      {"figure-eight", braid_closure({1, -2, 1, -2}, {c(), c(), c()}), {1, 0, -1}},
      {"cinquefoil", braid_closure({1, 1, 1, 1, 1}, {c(), c()}), {1, 0, 3, 0, 1}},
      {"three-twist", braid_closure({1, 1, 1, 2, -1, 2}, {c(), c(), c()}), {1, 0, 2}},
      {"T(3,4)", braid_closure({1, 2, 1, 2, 1, 2, 1, 2}, {c(), c(), c()}), {1, 0, 5, 0, 5, 0, 1}},
      {"T(2,4)", braid_closure({1, 1, 1, 1}, {c(), c(0.3)}), {0, 2, 0, 1}},
      {"borromean", braid_closure({1, -2, 1, -2, 1, -2}, {c(), c(0.3), c(0.7)}), {0, 0, 0, 0, 1}},
      {"chain3", chain_link({0, 0, 0}, {c(), c(0.3), c(0.7)}), {0, 0, 1}},
  };
}
}  // namespace

TEST(Wirtinger, Counts) {
  auto u = wirtinger(unknot(c()));
  EXPECT_EQ(u.generators, 1u);
  EXPECT_EQ(u.relators.size(), 0u);
  auto t = wirtinger(catalog_link("trefoil"));
  EXPECT_EQ(t.generators, 3u);
  EXPECT_EQ(t.relators.size(), 3u);
  auto h = wirtinger(catalog_link("hopf+"));
  EXPECT_EQ(h.generators, 2u);
  EXPECT_EQ(h.relators.size(), 2u);
  EXPECT_EQ(h.component_count, 2u);
}

TEST(Wirtinger, RejectsCoupons) {
  SlicedDiagram d = t_gamma(theta_graph(0.3, 0.45));
  EXPECT_THROW(wirtinger(d), DiagramError);
}

TEST(Fox, Examples) {
  EXPECT_TRUE(equal_up_to_units(fox_alexander(catalog_link("trefoil")), {1, -1, 1}));
  EXPECT_TRUE(equal_up_to_units(fox_alexander(catalog_link("figure-eight")), {1, -3, 1}));
  EXPECT_TRUE(is_unit(fox_alexander(unknot(c()))));
  EXPECT_TRUE(is_unit(fox_alexander(catalog_link("hopf+"))));
  EXPECT_TRUE(is_unit(fox_alexander(catalog_link("hopf-"))));
}

TEST(Fox, SplitLinkVanishes) {
  EXPECT_TRUE(fox_alexander(disjoint_union(unknot(c()), unknot(c(0.3)))).is_zero());
}

TEST(Fox, InvariantUnderDiagramMoves) {
  auto base = fox_alexander(braid_closure({1, 1, 1}, {c(), c()}));
  // Markov stabilization
  auto stab = fox_alexander(braid_closure({1, 1, 1, 2}, {c(), c(), c()}));
  EXPECT_TRUE(equal_up_to_units(stab, coeffs(base)));
  // Reidemeister II pair inserted mid-diagram
  SlicedDiagram d = braid_closure({1, 1, 1}, {c(), c()});
  d.slices.insert(d.slices.begin() + 3, {SliceEvent::cross_pos(0), SliceEvent::cross_neg(0)});
  EXPECT_TRUE(equal_up_to_units(fox_alexander(d), coeffs(base)));
}

TEST(Fox, SplitDiagramsVanish) {
  EXPECT_TRUE(fox_alexander(disjoint_union(catalog_link("trefoil"), unknot(c(0.3)))).is_zero());
  // trefoil with an unknot passing over one of its strands
  SlicedDiagram over = braid_closure({2, 1, 1, 1, -2}, {c(), c(0.3), c()});
  EXPECT_TRUE(fox_alexander(over).is_zero());
  EXPECT_TRUE(conway_skein(over).is_zero());
}

TEST(Skein, MatchesTables) {
  for (const auto& k : table()) EXPECT_EQ(conway_skein(k.d), ZPoly{k.conway}) << k.name << ": " << conway_skein(k.d).to_string();
}

TEST(Skein, Printing) {
  EXPECT_EQ(ZPoly({1, 0, 1}).to_string(), "z^2 + 1");
  EXPECT_EQ(ZPoly({0, -1}).to_string(), "-z");
}

TEST(Normalize, Examples) {
  auto u = conway_function(unknot(c()));
  EXPECT_TRUE(u.divisor);
  EXPECT_EQ(u.numerator, LaurentPoly::constant(1, 1));
  auto t = conway_function(catalog_link("trefoil"));
  EXPECT_TRUE(t.divisor);
  EXPECT_EQ(t.to_string(), "(t1^2 - 1 + t1^-2)/(t1 - t1^-1)");
  EXPECT_EQ(conway_function(catalog_link("hopf+")).numerator, LaurentPoly::constant(2, 1));
  EXPECT_EQ(conway_function(catalog_link("hopf-")).numerator, LaurentPoly::constant(2, -1));
}

TEST(Normalize, SymmetricAndAnchored) {
  for (const auto& k : table()) {
    auto f = conway_function(k.d);
    EXPECT_TRUE(f.anchored) << k.name;
    EXPECT_EQ(symmetry_defect(f), 0u) << k.name;
  }
}

TEST(Normalize, SpecializesToSkein) {
  // (t - 1/t) nabla(t,...,t) = C(t - 1/t), with the divisor cancelling for knots
  for (const auto& k : table()) {
    auto f = conway_function(k.d);
    const std::size_t m = f.components();
    for (Scalar t : {Scalar(1.3, 0.2), Scalar(-0.7, 0.4)}) {
      Scalar lhs = f.numerator.evaluate(std::vector<Scalar>(m, t));
      if (!f.divisor) lhs *= t - 1.0 / t;
      Scalar z = t - 1.0 / t, rhs = 0, zp = 1;
      for (auto a : k.conway) rhs += double(a) * zp, zp *= z;
      EXPECT_LT(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs))) << k.name;
    }
  }
}

TEST(Evaluate, Examples) {
  auto u = conway_function(unknot(c()));
  Scalar t = std::exp(kI * kPi * 1.5 / 2.0);  // i^{3/2}
  EXPECT_LT(std::abs(evaluate_nabla(u, {t}) - 1.0 / (t - 1.0 / t)), 1e-12);
  auto h = conway_function(catalog_link("chain3"));
  EXPECT_FALSE(h.divisor);
  EXPECT_LT(std::abs(evaluate_nabla(h, {1.0, 1.0, 1.0}) - double(h.numerator.coefficient_sum())), 1e-12);
}
