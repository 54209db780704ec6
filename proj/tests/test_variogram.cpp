#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/model_io.hpp"
#include "bvg/oracle.hpp"
#include "bvg/variogram.hpp"

using namespace bvg;

namespace {

Mat eye(int d) { return Mat::Identity(d, d); }

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST(Variogram, MaProductMatchesClosedForm) {
  const auto g = ma_product(1.0, 2.0, eye(2), 2);
  EXPECT_TRUE(g.certified_all_dims());
  Vec xi(2);
  xi << 0.3, -0.4;
  const double r = 0.5;
  EXPECT_NEAR(g(xi), (1 - std::exp(-r)) * (1 - std::exp(-2 * r)), 1e-15);
  EXPECT_EQ(g(Vec::Zero(2)), 0.0);
}

TEST(Variogram, AnisotropyMatrixIsApplied) {
  Mat a(2, 2);
  a << 2.0, 0.0, 0.0, 0.5;
  const auto g = make_variogram(catalog("power", {{"a", 1.0}}), a, 2);
  Vec xi(2);
  xi << 1.0, 2.0;
  EXPECT_NEAR(g(xi), 4.0 + 1.0, 1e-15);
  EXPECT_THROW(make_variogram(catalog("log1p"), eye(3), 2), DomainError);
}

TEST(Variogram, UncertifiedProfileIsFlagged) {
  const auto g = make_variogram(catalog("monomial", {{"p", 2.0}}), eye(1), 1);
  EXPECT_FALSE(g.certified);
  EXPECT_FALSE(g.notes.empty());
}

TEST(Variogram, SchurGate) {
  const auto m = catalog("matern");
  EXPECT_NO_THROW(schur_product_extended(m, m, 0.5, 0.5, eye(1), 1));
  EXPECT_THROW(schur_product_extended(m, m, 0.75, 0.5, eye(1), 1), ParameterGateError);
  EXPECT_THROW(schur_product_extended(m, m, -0.1, 0.5, eye(1), 1), ParameterGateError);
  const auto loose = schur_product_extended(m, m, 0.75, 0.5, eye(1), 1, true);
  EXPECT_FALSE(loose.certified);
}

TEST(Variogram, WendlandGateAndSupport) {
  for (int d = 1; d <= 6; ++d)
    for (int l = 1; l <= 6; ++l) {
      if (l < d / 2 + 1)
        EXPECT_THROW(wendland(1.0, l, d), ParameterGateError) << l << "," << d;
      else
        EXPECT_NO_THROW(wendland(1.0, l, d)) << l << "," << d;
    }
  const auto w = wendland(2.0, 2, 1);
  EXPECT_EQ(w.support_radius, 2.0);
  EXPECT_NEAR(w.radial(1.0), 0.25, 1e-15);
  EXPECT_EQ(w.radial(2.5), 0.0);
  const auto g = variogram_from_covariance(w);
  EXPECT_NEAR(g.radial(1.0), 0.75, 1e-15);
  EXPECT_EQ(g.radial(3.0), 1.0);
  ASSERT_TRUE(g.sill);
  EXPECT_EQ(*g.sill, 1.0);
}

TEST(Variogram, SphericalDimensionLimit) {
  const auto s = spherical(2.0, 3);
  EXPECT_TRUE(s.certified_in(3));
  EXPECT_FALSE(s.certified_in(4));
  EXPECT_NEAR(s.radial(1.0), 0.75 - 0.0625, 1e-15);
  EXPECT_EQ(s.radial(5.0), 1.0);
  EXPECT_FALSE(spherical(2.0, 4).certified);
}

TEST(Variogram, CbfConstructions) {
  const auto g = catalog("log1p");
  const auto r = cbf_variograms(g, CbfVariogram::Ratio, 1);
  const auto i = cbf_variograms(g, CbfVariogram::InvArg, 1);
  const auto ir = cbf_variograms(g, CbfVariogram::InvArgRatio, 1);
  for (double x : {0.2, 1.0, 5.0}) {
    EXPECT_NEAR(r.squared_profile(x), x / std::log1p(x), 1e-13);
    EXPECT_NEAR(i.squared_profile(x), 1.0 / std::log1p(1.0 / x), 1e-13);
    EXPECT_NEAR(ir.squared_profile(x), x * std::log1p(1.0 / x), 1e-13);
  }
  for (const auto* v : {&r, &i, &ir}) EXPECT_TRUE(v->certified_all_dims());
}

TEST(Variogram, CompositionProducts) {
  const auto g1 = catalog("power", {{"a", 0.5}});
  const auto g2 = catalog("lambda_ratio", {{"lambda", 1.0}});
  const auto two = composition_products(g1, g2, std::nullopt, CompositionProduct::TwoFactor, 1);
  const auto three =
      composition_products(g1, g2, catalog("log1p"), CompositionProduct::ThreeFactor, 1);
  for (double x : {0.3, 2.0}) {
    const double s = std::sqrt(x);
    EXPECT_NEAR(two.squared_profile(x), s * (s / (1 + s)), 1e-14);
    EXPECT_NEAR(three.squared_profile(x), std::log1p(s) * (s / (1 + s)), 1e-14);
  }
  EXPECT_TRUE(two.certified && three.certified);
}

TEST(Variogram, CatalogsAreCertified) {
  for (int d = 1; d <= 4; ++d) {
    for (const auto& [name, v] : variogram_catalog(d)) EXPECT_TRUE(v.certified_in(d)) << name;
    for (const auto& [name, c] : covariance_catalog(d)) {
      EXPECT_TRUE(c.certified) << name;
      EXPECT_NEAR(c.radial(0.0), c.sill, 1e-15) << name;
    }
  }
}

TEST(ModelIo, RoundTripPreservesValues) {
  const std::vector<Model> models = {
      model_from_json(to_json(ma_product(0.5, 2.0, eye(2), 2))),
      model_from_json(to_json(wendland(1.5, 3, 3))),
      construct(nlohmann::json::parse(
          R"({"constructor":"difference_kernel","eta":[0.5],"base":{"constructor":"spherical","range":2}})")),
  };
  for (const auto& m : models) {
    const auto again = model_from_json(nlohmann::json::parse(to_json(m).dump()));
    EXPECT_EQ(to_json(again), to_json(m));
    const auto k1 = m.kernel(), k2 = again.kernel();
    Vec xi = Vec::Constant(m.dim(), 0.37);
    EXPECT_EQ(k1(xi), k2(xi));
  }
}

TEST(ModelIo, ConstructErrors) {
  EXPECT_THROW(construct(nlohmann::json::parse(R"({"constructor":"wendland","r":1,"l":1,"d":3})")),
               ParameterGateError);
  EXPECT_THROW(construct(nlohmann::json::parse(R"({"constructor":"nope"})")), ParseError);
  EXPECT_THROW(construct(nlohmann::json::parse(R"({"constructor":"ma_product","a1":1})")), ParseError);
  EXPECT_THROW(model_from_json(nlohmann::json::parse(
                   R"({"kind":"variogram","profile":{"atom":"log1p"},"d":2,"A":[[1,0]]})")),
               ParseError);
}

TEST(Covariance, CosineAndNugget) {
  const auto c = cosine_covariance(2.0);
  EXPECT_NEAR(c(v1(0.5)), std::cos(1.0), 1e-15);
  EXPECT_EQ(c.max_dim, 1);
  const auto n = nugget_covariance(2);
  EXPECT_EQ(n(Vec::Zero(2)), 1.0);
  EXPECT_EQ(n(Vec::Constant(2, 1e-9)), 0.0);
}

namespace {

std::vector<std::pair<std::string, Variogram>> all_certified(int d) {
  auto v = variogram_catalog(d);
  for (auto& [name, c] : covariance_catalog(d)) v.emplace_back(name + "_variogram", variogram_from_covariance(c));
  return v;
}

}  // namespace

TEST(Properties, EvenUpToRounding) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int d = 1; d <= 3; ++d) {
    const auto models = all_certified(d);
    for (int k = 0; k < 1000; ++k) {
      const auto& [name, v] = models[rng() % models.size()];
      Vec xi(d);
      for (int i = 0; i < d; ++i) xi[i] = u(rng);
      const double a = v(xi), b = v(-xi);
      EXPECT_LE(std::abs(a - b), 4e-16 * std::abs(a)) << name;
    }
  }
}

TEST(Properties, CertifiedModelsPassCnd) {
  for (int d = 1; d <= 3; ++d)
    for (const auto& [name, v] : all_certified(d))
      for (std::uint64_t s = 0; s < 20; ++s) {
        const auto pts = PointSet::random(3 + s % 10, d, -5, 5, 300 + s);
        EXPECT_TRUE(cnd_check(v.kernel(), pts).passed()) << name << " d=" << d << " seed " << s;
      }
}

TEST(Properties, BoundedByTwiceTheSill) {
  for (int d = 1; d <= 3; ++d)
    for (const auto& [name, c] : covariance_catalog(d)) {
      const auto g = variogram_from_covariance(c);
      for (double r : linear_grid(0.0, 6.0, 61)) {
        EXPECT_GE(g.radial(r), 0.0) << name;
        EXPECT_LE(g.radial(r), 2.0 * c.sill) << name;
      }
    }
}

TEST(Properties, MaLimitIsTheNorm) {
  // (1 - e^{-a|xi|}) / a -> |xi| as a -> 0.
  for (double r : {0.1, 1.0, 3.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const auto g = make_variogram(catalog("exp_one_minus", {{"a", a}}), Mat::Identity(1, 1), 1,
                                    ArgumentMode::Norm);
      const double gap = std::abs(g.radial(r) / a - r);
      EXPECT_LT(gap, prev);
      prev = gap;
    }
    EXPECT_LT(prev, 1e-3 * r * r);
  }
}

TEST(Properties, SingularAnisotropyIsConstantAlongKernel) {
  Mat a(2, 2);
  a << 1.0, 1.0, 0.0, 0.0;
  const auto g = make_variogram(catalog("log1p"), a, 2);
  Vec xi(2), k(2);
  xi << 0.3, 0.8;
  k << 1.0, -1.0;
  for (double t : {-3.0, 0.5, 10.0}) EXPECT_NEAR(g(xi + t * k), g(xi), 1e-14);
  EXPECT_TRUE(cnd_check(g.kernel(), PointSet::random(10, 2, -5, 5, 1)).passed());
}
