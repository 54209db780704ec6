#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/oracle.hpp"
#include "bvg/variogram.hpp"
#include "support/oracles.hpp"

using namespace bvg;

namespace {

Kernel radial(std::function<double(double)> f) {
  return [f](const Vec& x) { return f(x.norm()); };
}

}  // namespace

TEST(PointSet, RandomIsSeeded) {
  const auto a = PointSet::random(10, 3, -1, 1, 42);
  const auto b = PointSet::random(10, 3, -1, 1, 42);
  const auto c = PointSet::random(10, 3, -1, 1, 43);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.sites[i], b.sites[i]);
    EXPECT_LE(a.sites[i].maxCoeff(), 1.0);
    EXPECT_GE(a.sites[i].minCoeff(), -1.0);
  }
  EXPECT_NE(a.sites[0], c.sites[0]);
}

TEST(PointSet, CsvRoundTripAndErrors) {
  std::istringstream in("x1,x2,value\n0,0,1.5\n1,2,-3\n");
  const auto p = PointSet::read_csv(in);
  EXPECT_EQ(p.d, 2);
  ASSERT_TRUE(p.values);
  EXPECT_EQ((*p.values)[1], -3.0);
  std::ostringstream out;
  p.write_csv(out);
  std::istringstream back(out.str());
  const auto q = PointSet::read_csv(back);
  EXPECT_EQ(q.sites[1], p.sites[1]);

  for (const char* bad : {"x1,x2\n1,abc\n", "x1,x2\n1\n", "y1\n1\n", ""}) {
    std::istringstream s(bad);
    EXPECT_THROW(PointSet::read_csv(s), ParseError) << bad;
  }
}

TEST(ContrastBasis, IsOrthonormalAndSumsToZero) {
  const Mat q = contrast_basis(7);
  EXPECT_LE((q.transpose() * q - Mat::Identity(6, 6)).norm(), 1e-13);
  EXPECT_LE((Eigen::RowVectorXd::Ones(7) * q).norm(), 1e-13);
}

TEST(Cnd, TwoPointClosedForm) {
  // On two sites the contrast is (1,-1)/sqrt2 and a^T G a = -g.
  PointSet p = PointSet::from_rows({{0.0}, {1.0}});
  const auto rep = cnd_check(radial([](double r) { return r; }), p);
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(rep.checks[0].statistic, -1.0, 1e-14);
}

TEST(Cnd, FailsForQuartic) {
  // |x|^4 is not a variogram; a = (1,-2,1) on sites 0,1,2 gives
  // a^T G a = 2*16 - 4*2*1 = 24 > 0.
  PointSet p = PointSet::from_rows({{0.0}, {1.0}, {2.0}});
  const auto rep = cnd_check(radial([](double r) { return std::pow(r, 4); }), p);
  ASSERT_EQ(rep.verdict, Verdict::Fail);
  const auto& w = rep.checks[0].witness;
  EXPECT_NEAR(w["sum"].get<double>(), 0.0, 1e-12);
  EXPECT_GT(w["quadratic_form"].get<double>(), 0.0);
}

TEST(Cnd, InconclusiveOnEvaluationError) {
  PointSet p = PointSet::from_rows({{0.0}, {1.0}});
  const auto rep = variogram_axioms([](const Vec&) -> double { throw DomainError("x"); }, p);
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
}

TEST(Pd, EigenvalueAgainstTwoByTwo) {
  PointSet p = PointSet::from_rows({{0.0}, {0.5}});
  const auto c = radial([](double r) { return std::exp(-r); });
  const auto rep = pd_check(c, p);
  EXPECT_TRUE(rep.passed());
  const auto [lo, hi] = oracle::eig2(1.0, std::exp(-0.5), 1.0);
  EXPECT_GT(lo, 0.0);
  (void)hi;
  EXPECT_NEAR(rep.checks[0].statistic, -lo, 1e-14);
  // -1 off the diagonal is not positive definite on three sites.
  const auto bad = [](const Vec& x) { return x.norm() == 0 ? 1.0 : -1.0; };
  EXPECT_EQ(pd_check(bad, PointSet::from_rows({{0.0}, {1.0}, {2.0}})).verdict, Verdict::Fail);
}

TEST(DividedDifference, Polynomial) {
  const std::vector<double> x{0.0, 1.0, 3.0, 4.0};
  std::vector<double> fx;
  for (double t : x) fx.push_back(t * t * t);
  EXPECT_NEAR(divided_difference(x, fx).value, 1.0, 1e-14);
}

TEST(CmCheck, KnownFunctions) {
  const auto grid = log_grid(1e-2, 1e2, 40);
  EXPECT_TRUE(cm_check([](double x) { return std::exp(-x); }, grid, 8).passed());
  EXPECT_TRUE(cm_check([](double x) { return 1.0 / (x * (1 + x * x)); }, grid, 8).passed());
  EXPECT_EQ(cm_check([](double x) { return std::sin(x); }, grid, 8).verdict, Verdict::Fail);
  EXPECT_EQ(cm_check([](double x) { return x; }, grid, 2).verdict, Verdict::Fail);
}

TEST(BernsteinCheck, KnownFunctions) {
  const auto grid = log_grid(1e-2, 1e2, 40);
  EXPECT_TRUE(bernstein_check([](double x) { return std::sqrt(x); }, grid, 6).passed());
  EXPECT_TRUE(bernstein_check([](double x) { return std::log1p(x); }, grid, 6).passed());
  EXPECT_EQ(bernstein_check([](double x) { return x * x; }, grid, 6).verdict, Verdict::Fail);
  EXPECT_EQ(bernstein_check([](double x) { return std::exp(-x); }, grid, 6).verdict, Verdict::Fail);
}

TEST(PolyaCheck, TriangleAndCosine) {
  const auto grid = linear_grid(0.0, 5.0, 51);
  const auto tri = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
  EXPECT_TRUE(polya_check(tri, grid).passed());
  EXPECT_EQ(polya_check([](double x) { return std::cos(x); }, grid).verdict, Verdict::Fail);
}

TEST(ProfileShape, ConcaveVsConvex) {
  const auto grid = log_grid(1e-2, 1e2, 30);
  EXPECT_TRUE(profile_shape_check([](double x) { return std::sqrt(x); }, grid).passed());
  EXPECT_TRUE(profile_shape_check([](double x) { return std::log1p(x); }, grid).passed());
  const auto rep = profile_shape_check([](double x) { return x * x; }, grid);
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  ASSERT_NE(rep.find("subadditive"), nullptr);
  EXPECT_EQ(rep.find("subadditive")->verdict, Verdict::Fail);
  EXPECT_EQ(rep.find("increasing")->verdict, Verdict::Pass);
}

TEST(SqrtSubadditivity, CubeFailsAtOneOne) {
  PointSet p = PointSet::from_rows({{0.0}, {1.0}});
  const auto rep = sqrt_subadditivity_check(radial([](double r) { return r * r * r; }), p);
  ASSERT_EQ(rep.verdict, Verdict::Fail);
  const auto& w = rep.checks[0].witness;
  EXPECT_EQ(w["xi"][0].get<double>(), 1.0);
  EXPECT_EQ(w["eta"][0].get<double>(), 1.0);
  EXPECT_NEAR(w["sqrt_gamma_sum"].get<double>(), std::sqrt(8.0), 1e-14);
  EXPECT_TRUE(sqrt_subadditivity_check(radial([](double r) { return r * r; }), p).passed());
}

TEST(DetectPeriod, CosineAndNone) {
  const auto per = detect_period(radial([](double r) { return 1 - std::cos(r); }), 1, 20.0);
  ASSERT_TRUE(per);
  EXPECT_NEAR(std::abs((*per)[0]), 2 * std::numbers::pi, 1e-7);
  EXPECT_FALSE(detect_period(radial([](double r) { return r; }), 1, 20.0));
  EXPECT_FALSE(detect_period(radial([](double r) { return 1 - std::exp(-r); }), 2, 20.0));
  // Period along the second axis only.
  const Kernel g2 = [](const Vec& x) { return x[0] * x[0] + 1 - std::cos(3 * x[1]); };
  const auto p2 = detect_period(g2, 2, 5.0);
  ASSERT_TRUE(p2);
  EXPECT_NEAR((*p2)[1], 2 * std::numbers::pi / 3, 1e-7);
  EXPECT_EQ((*p2)[0], 0.0);
}

TEST(EventualConstancy, Verdicts) {
  const auto sph = spherical(1.0, 3);
  const auto r1 = eventual_constancy_check([&](double r) { return sph.radial(r); }, 2.0, 10.0,
                                           sph.certified_all_dims());
  EXPECT_TRUE(r1.passed());
  EXPECT_EQ(r1.checks[0].witness["constant"], true);
  EXPECT_EQ(r1.checks[0].witness["plateau"], 1.0);
  // A plateau claimed valid in every dimension contradicts strict increase.
  const auto r2 = eventual_constancy_check([&](double r) { return sph.radial(r); }, 2.0, 10.0, true);
  EXPECT_EQ(r2.verdict, Verdict::Fail);
  const auto r3 = eventual_constancy_check([](double r) { return std::log1p(r); }, 2.0, 10.0, true);
  EXPECT_TRUE(r3.passed());
  EXPECT_EQ(r3.checks[0].witness["constant"], false);
}

TEST(Report, Precedence) {
  PermissibilityReport rep;
  rep.add({.name = "a", .verdict = Verdict::Pass});
  EXPECT_EQ(rep.verdict, Verdict::Pass);
  rep.add({.name = "b", .verdict = Verdict::Inconclusive});
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
  rep.add({.name = "c", .verdict = Verdict::Fail});
  rep.add({.name = "d", .verdict = Verdict::Inconclusive});
  EXPECT_EQ(rep.verdict, Verdict::Fail);
  EXPECT_EQ(rep.to_json()["verdict"], "fail");
}

TEST(Properties, FailWitnessesAreValid) {
  const std::vector<Kernel> bad = {
      radial([](double r) { return std::pow(r, 4); }),
      radial([](double r) { return std::pow(r, 2.5); }),
      radial([](double r) { return std::exp(-r); }),
  };
  for (const auto& k : bad)
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto pts = PointSet::random(4 + s % 8, 2, -5, 5, 70 + s);
      const auto rep = cnd_check(k, pts);
      if (rep.verdict != Verdict::Fail) continue;
      const auto a = rep.checks[0].witness["contrast"].get<std::vector<double>>();
      const Mat g = kernel_matrix(k, pts);
      const Vec av = Eigen::Map<const Vec>(a.data(), static_cast<Eigen::Index>(a.size()));
      EXPECT_NEAR(av.sum(), 0.0, 1e-12);
      EXPECT_GT(av.dot(g * av), kDefaultTol * matrix_scale(g) / 2);
    }
}

TEST(Properties, VerdictsAreScaleEquivariant) {
  const std::vector<Kernel> ks = {
      radial([](double r) { return r; }), radial([](double r) { return std::pow(r, 3); }),
      radial([](double r) { return 1 - std::exp(-r * r); }), radial([](double r) { return r * r; })};
  for (const auto& k : ks)
    for (double lambda : {1e-12, 1e-3, 7.0, 1e9})
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto pts = PointSet::random(3 + s, 1, -5, 5, 90 + s);
        const Kernel scaled = [&](const Vec& x) { return lambda * k(x); };
        EXPECT_EQ(cnd_check(k, pts).verdict, cnd_check(scaled, pts).verdict);
        EXPECT_EQ(pd_check(k, pts).verdict, pd_check(scaled, pts).verdict);
      }
}

TEST(Properties, PeriodicVariogramPassesAcrossPeriods) {
  const auto g = radial([](double r) { return 1 - std::cos(r); });
  const auto per = detect_period(g, 1, 20.0);
  ASSERT_TRUE(per);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto pts = PointSet::random(6, 1, 0, 3, 40 + s);
    const auto base = pts.sites;
    for (int m = 1; m <= 3; ++m)
      for (const auto& x : base) pts.sites.push_back(x + m * *per + Vec::Constant(1, 0.01 * m));
    EXPECT_TRUE(cnd_check(g, pts).passed());
  }
}

TEST(Properties, ReportEchoesToleranceAndSeed) {
  PermissibilityReport rep = cnd_check(radial([](double r) { return r; }), PointSet::random(5, 1, 0, 1, 3), 1e-6);
  rep.seed = 3;
  const auto j = rep.to_json();
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["checks"][0]["tolerance"], 1e-6);
}
