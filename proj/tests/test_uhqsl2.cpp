#include <gtest/gtest.h>

#include <nss3m/uhqsl2.hpp>
#include <random>

using namespace nss3m;

namespace {
Scalar random_alpha(std::mt19937& g) {
  std::uniform_real_distribution<double> re(-1.8, 1.8), im(-0.5, 0.5);
  for (;;) {
    Scalar a{re(g), im(g)};
    if (std::abs(a.real() - std::round(a.real())) > 0.05) return a;
  }
}

Mat id(std::size_t n) { return Mat::Identity(Eigen::Index(n), Eigen::Index(n)); }

double rel(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, a.norm()); }

Scalar scalar_or_fail(const Mat& m) {
  Scalar lam;
  double res = 0;
  EXPECT_TRUE(scalar_of(m, 1e-9, lam, &res)) << "residual " << res;
  return lam;
}

// F(closure of id_V) with the left-to-right pivot: tr(P).
Scalar qdim(const RootData& rd, const ModuleRep& v) { return pivot(rd, v).trace(); }
}  // namespace

TEST(TypicalModule, WeightsAndE) {
  RootData rd(2);
  Scalar a(0.37, 0.1);
  auto v = typical_module(rd, a);
  ASSERT_EQ(v.dim(), 2u);
  EXPECT_LT(std::abs(v.weights[0] - (a + 1.0)), 1e-14);
  EXPECT_LT(std::abs(v.weights[1] - (a - 1.0)), 1e-14);
  // [a+1] at r=2 is sin(pi (a+1)/2)
  EXPECT_LT(std::abs(v.E(0, 1) - std::sin(kPi * (a + 1.0) / 2.0)), 1e-12);
  EXPECT_LT(std::abs(v.F(1, 0) - 1.0), 1e-14);
}

TEST(TypicalModule, RejectsAtypicalWeight) {
  for (int r = 2; r <= 5; ++r) EXPECT_THROW(typical_module(RootData(r), 1.0), Error);
}

TEST(Relations, RandomTypical) {
  std::mt19937 g(11);
  for (int r = 2; r <= 5; ++r) {
    RootData rd(r);
    for (int k = 0; k < 10; ++k) {
      auto v = typical_module(rd, random_alpha(g));
      EXPECT_LT(relation_residuals(rd, v).max(), 1e-8) << "r=" << r;
      EXPECT_LT(relation_residuals(rd, dual_module(rd, v)).max(), 1e-8) << "dual r=" << r;
    }
  }
}

TEST(Relations, TensorProductsAreModules) {
  std::mt19937 g(12);
  for (int r : {2, 3}) {
    RootData rd(r);
    auto v = typical_module(rd, random_alpha(g)), w = typical_module(rd, random_alpha(g));
    EXPECT_LT(relation_residuals(rd, tensor_module(rd, v, w)).max(), 1e-8);
  }
}

TEST(PeriodicModule, TrivialAndDimensionOne) {
  for (int r = 2; r <= 5; ++r) {
    RootData rd(r);
    auto e0 = periodic_module(rd, 0);
    EXPECT_EQ(e0.dim(), 1u);
    EXPECT_LT(e0.H.norm(), 1e-15);
    for (long t : {-2L, 0L, 1L, 3L}) EXPECT_LT(std::abs(qdim(rd, periodic_module(rd, t)) - 1.0), 1e-12);
  }
}

TEST(PeriodicModule, FreeRealization) {
  RootData rd(3);
  for (long t : {-1L, 0L, 2L})
    for (long s : {-3L, 1L}) {
      auto ts = tensor_module(rd, periodic_module(rd, t), periodic_module(rd, s));
      EXPECT_LT(std::abs(ts.weights[0] - periodic_module(rd, t + s).weights[0]), 1e-12);
    }
}

TEST(Braiding, TrivialModuleGivesFlip) {
  std::mt19937 g(13);
  for (int r : {2, 3, 4}) {
    RootData rd(r);
    auto v = typical_module(rd, random_alpha(g));
    auto e0 = periodic_module(rd, 0);
    EXPECT_LT((braiding(rd, e0, v) - flip_matrix(1, v.dim())).norm(), 1e-12);
    EXPECT_LT((braiding(rd, v, e0) - flip_matrix(v.dim(), 1)).norm(), 1e-12);
  }
}

TEST(Braiding, InverseAndYangBaxter) {
  std::mt19937 g(14);
  for (int r : {2, 3}) {
    RootData rd(r);
    for (int k = 0; k < 3; ++k) {
      auto u = typical_module(rd, random_alpha(g)), v = typical_module(rd, random_alpha(g)),
           w = typical_module(rd, random_alpha(g));
      EXPECT_LT(rel(braiding(rd, v, u) * braiding_inv(rd, u, v), id(u.dim() * v.dim())), 1e-10);
      Mat lhs = kron(braiding(rd, v, w), id(u.dim())) * kron(id(v.dim()), braiding(rd, u, w)) *
                kron(braiding(rd, u, v), id(w.dim()));
      Mat rhs = kron(id(w.dim()), braiding(rd, u, v)) * kron(braiding(rd, u, w), id(v.dim())) *
                kron(id(u.dim()), braiding(rd, v, w));
      EXPECT_LT(rel(lhs, rhs), 1e-8) << "r=" << r;
    }
  }
}

TEST(Braiding, IsModuleMorphism) {
  std::mt19937 g(15);
  RootData rd(3);
  auto v = typical_module(rd, random_alpha(g)), w = typical_module(rd, random_alpha(g));
  auto vw = tensor_module(rd, v, w), wv = tensor_module(rd, w, v);
  Mat c = braiding(rd, v, w);
  EXPECT_LT(rel(c * vw.E, wv.E * c), 1e-8);
  EXPECT_LT(rel(c * vw.F, wv.F * c), 1e-8);
  EXPECT_LT(rel(c * vw.H, wv.H * c), 1e-8);
}

TEST(Twist, ScalarOnSimples) {
  std::mt19937 g(16);
  for (int r = 2; r <= 5; ++r) {
    RootData rd(r);
    EXPECT_LT((twist(rd, periodic_module(rd, 0)) - id(1)).norm(), 1e-12);
    for (int k = 0; k < 4; ++k) scalar_or_fail(twist(rd, typical_module(rd, random_alpha(g))));
  }
}

TEST(Twist, CompatibleWithBraiding) {
  std::mt19937 g(17);
  for (int r : {2, 3}) {
    RootData rd(r);
    auto v = typical_module(rd, random_alpha(g)), w = typical_module(rd, random_alpha(g));
    Mat lhs = twist(rd, tensor_module(rd, v, w));
    Mat rhs = braiding(rd, w, v) * braiding(rd, v, w) * kron(twist(rd, v), twist(rd, w));
    EXPECT_LT(rel(lhs, rhs), 1e-8);
  }
}

TEST(Twist, Natural) {
  std::mt19937 g(18);
  RootData rd(3);
  auto v = typical_module(rd, random_alpha(g)), w = typical_module(rd, random_alpha(g));
  Mat c = braiding(rd, v, w);
  EXPECT_LT(rel(c * twist(rd, tensor_module(rd, v, w)), twist(rd, tensor_module(rd, w, v)) * c), 1e-8);
}

TEST(Duality, ZigZags) {
  std::mt19937 g(19);
  for (int r : {2, 3, 4}) {
    RootData rd(r);
    auto v = typical_module(rd, random_alpha(g));
    DualData dd = dual_data(rd, v);
    const Mat i = id(v.dim());
    EXPECT_LT(rel(kron(i, dd.d) * kron(dd.b, i), i), 1e-10);
    EXPECT_LT(rel(kron(dd.d, i) * kron(i, dd.b), i), 1e-10);
    EXPECT_LT(rel(kron(dd.d_prime, i) * kron(i, dd.b_prime), i), 1e-10);
    EXPECT_LT(rel(kron(i, dd.d_prime) * kron(dd.b_prime, i), i), 1e-10);
  }
}

TEST(Duality, TypicalQuantumDimensionVanishes) {
  std::mt19937 g(20);
  for (int r = 2; r <= 5; ++r) {
    RootData rd(r);
    for (int k = 0; k < 3; ++k) {
      auto v = typical_module(rd, random_alpha(g));
      EXPECT_LT(std::abs(qdim(rd, v)), 1e-10);
      // partial closure of id_{V(x)V} on the second factor
      Mat closed = partial_close(DenseMap::identity(v.dim() * v.dim()), {v.dim(), v.dim()}, 1, pivot(rd, v)).m;
      EXPECT_LT(closed.norm(), 1e-10);
    }
  }
}

TEST(ModDim, Examples) {
  RootData rd(2);
  EXPECT_LT(std::abs(mod_dim(rd, 0.5) + std::sqrt(2.0)), 1e-12);
  std::mt19937 g(21);
  for (int k = 0; k < 10; ++k) {
    Scalar a = random_alpha(g);
    EXPECT_LT(std::abs(mod_dim(rd, a) + 1.0 / std::cos(kPi * a / 2.0)), 1e-10 * std::abs(mod_dim(rd, a)));
  }
}

TEST(ModDim, ProductSinePeriodic) {
  std::mt19937 g(22);
  for (int r = 2; r <= 5; ++r) {
    RootData rd(r);
    for (int k = 0; k < 20; ++k) {
      Scalar a = random_alpha(g);
      EXPECT_LT(rel_err(mod_dim_product(rd, a), mod_dim_sine(rd, a)), 1e-9);
      EXPECT_LT(rel_err(mod_dim(rd, a + 2.0 * r), mod_dim(rd, a)), 1e-9);
    }
  }
}

TEST(Degree, Examples) {
  RootData rd(2);
  EXPECT_TRUE(degree(rd, Color::typical(0.5)).equals(GradeClass(1.5)));
  EXPECT_TRUE(degree(rd, Color::periodic(5)).equals(GradeClass(0.0)));
  EXPECT_TRUE(degree(rd, Color::dual_of(Color::typical(0.5))).equals(GradeClass(0.5)));
}

TEST(SkeinPairing, ScalarAndBilinear) {
  std::mt19937 g(23);
  for (int r : {2, 3}) {
    RootData rd(r);
    auto psi = [&](const ModuleRep& v, const ModuleRep& e) {
      return scalar_or_fail(braiding(rd, e, v) * braiding(rd, v, e));
    };
    auto v = typical_module(rd, random_alpha(g)), w = typical_module(rd, random_alpha(g));
    for (long t : {1L, 2L, -1L}) {
      auto e = periodic_module(rd, t);
      Scalar pv = psi(v, e), pw = psi(w, e);
      EXPECT_LT(std::abs(psi(tensor_module(rd, v, w), e) - pv * pw), 1e-9 * std::max(1.0, std::abs(pv * pw)));
      for (long s : {1L, -2L}) {
        Scalar lhs = psi(v, periodic_module(rd, t + s));
        EXPECT_LT(std::abs(lhs - pv * psi(v, periodic_module(rd, s))), 1e-9 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
}

TEST(Formatting, FixedAndLocaleFree) {
  EXPECT_EQ(format_scalar({1.5, -0.25}, 3), "1.500-0.250i");
  EXPECT_EQ(format_scalar({-1e-14, 2.0}, 4), "0.0000+2.0000i");
}
