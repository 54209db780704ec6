#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/oracle.hpp"
#include "bvg/schoenberg.hpp"
#include "support/oracles.hpp"

using namespace bvg;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST(ShiftKernels, ClosedForms) {
  const Kernel quad = [](const Vec& x) { return x.squaredNorm(); };
  const Kernel cosv = [](const Vec& x) { return 1 - std::cos(x[0]); };
  for (double eta : {0.3, 1.7}) {
    for (double xi : {-2.0, 0.0, 0.9}) {
      EXPECT_NEAR(difference_kernel(quad, v1(eta))(v1(xi)), 2 * eta * eta, 1e-13);
      EXPECT_NEAR(difference_kernel(cosv, v1(eta))(v1(xi)),
                  2 * (1 - std::cos(eta)) * std::cos(xi), 1e-14);
    }
  }
}

TEST(ShiftKernels, IdentityAndPermissibility) {
  const auto base = ma_product(1.0, 2.0, Mat::Identity(2, 2), 2);
  Vec eta(2);
  eta << 0.4, -0.7;
  const auto pair = make_shift_pair(base, eta);
  const auto pts = PointSet::random(10, 2, -2, 2, 9);
  for (const auto& x : pts.sites) {
    const double lhs = pair.difference(x) + pair.sum(x);
    EXPECT_NEAR(lhs, 2 * base(eta), 1e-12 * std::abs(2 * base(eta)));
  }
  EXPECT_TRUE(pd_check(pair.difference, pts).passed());
  EXPECT_TRUE(cnd_check(pair.sum, pts).passed());
  // phi is symmetric in (xi, eta), so it is a variogram in eta as well.
  const auto phi = sum_kernel_binary(base.kernel());
  for (const auto& x : pts.sites) EXPECT_NEAR(phi(x, eta), phi(eta, x), 1e-14);
}

TEST(Nonstationary, KernelIsPd) {
  const auto k = nonstationary_kernel([](double r) { return std::sqrt(r); });
  EXPECT_TRUE(pd_check(k, PointSet::random(10, 2, -3, 3, 1)).passed());
  EXPECT_THROW(nonstationary_kernel([](double r) { return 1 + r; }), DomainError);
}

TEST(Spectral, LogOnePlusX) {
  const auto g = spectral_variogram(catalog("log1p"));
  EXPECT_TRUE(g.certified_in(1));
  EXPECT_FALSE(g.certified_in(2));
  EXPECT_NEAR(g.radial(1.0), std::numbers::pi / 4, 1e-6);
  for (double xi : {-10.0, -3.0, -0.5, 0.0, 0.01, 2.0, 7.5}) {
    EXPECT_NEAR(g(v1(xi)), xi * std::atan(xi), 1e-6 * std::max(1.0, std::abs(xi * std::atan(xi))));
  }
}

TEST(Spectral, DriftOnly) {
  const auto g = spectral_variogram(catalog("power", {{"a", 1.0}}));
  for (double xi : {0.5, 2.0}) EXPECT_NEAR(g(v1(xi)), xi * xi, 1e-12);
}

TEST(Spectral, RejectsAtoms) {
  EXPECT_THROW(spectral_variogram(catalog("exp_one_minus")), DomainError);
}

TEST(ShiftKernels, SymmetryAndTrivialValues) {
  for (int d = 1; d <= 3; ++d)
    for (const auto& [name, v] : variogram_catalog(d)) {
      const auto g = v.kernel();
      const auto phi = sum_kernel_binary(g);
      const auto pts = PointSet::random(8, d, -4, 4, 17);
      const Vec zero = Vec::Zero(d);
      for (const auto& x : pts.sites)
        for (const auto& e : pts.sites) {
          EXPECT_EQ(phi(x, e), phi(e, x)) << name;
          EXPECT_NEAR(difference_kernel(g, e)(zero), 2 * g(e) - 2 * g(zero), 1e-14) << name;
        }
      for (const auto& x : pts.sites) {
        EXPECT_EQ(phi(zero, x), 0.0 + phi(zero, x));
        EXPECT_NEAR(sum_kernel(g, x)(zero), 0.0, 1e-14) << name;
        EXPECT_NEAR(sum_kernel(g, zero)(x), 0.0, 1e-14) << name;
      }
    }
}

TEST(ShiftKernels, IdentityOverCatalog) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const auto models = variogram_catalog(2);
  for (int k = 0; k < 1000; ++k) {
    const auto& v = models[rng() % models.size()].second;
    Vec xi(2), eta(2);
    xi << u(rng), u(rng);
    eta << u(rng), u(rng);
    const auto g = v.kernel();
    const double scale = std::max({std::abs(g(xi + eta)), std::abs(g(xi - eta)), std::abs(g(xi)),
                                   std::abs(g(eta)), 1e-300});
    EXPECT_LE(std::abs(difference_kernel(g, eta)(xi) + sum_kernel(g, eta)(xi) - 2 * g(eta)), 1e-12 * scale);
  }
}

TEST(ShiftKernels, MaCovarianceSpecialCase) {
  const auto gfun = [](double r) { return -std::expm1(-r) * -std::expm1(-2 * r); };
  const auto v = ma_product(1.0, 2.0, Mat::Identity(2, 2), 2);
  Vec x0(2);
  x0 << 0.7, -0.2;
  const auto c = difference_kernel(v.kernel(), x0);
  for (const auto& x : PointSet::random(50, 2, -3, 3, 8).sites) {
    const double want = gfun((x + x0).norm()) + gfun((x - x0).norm()) - 2 * gfun(x.norm());
    EXPECT_NEAR(c(x), want, 1e-14);
  }
}

TEST(Spectral, EvenVanishingAndQuadraticGrowth) {
  for (const auto& f : {catalog("log1p"), catalog("power", {{"a", 0.5}}),
                        sum({catalog("log1p"), catalog("power", {{"a", 1.0}})})}) {
    const auto g = spectral_variogram(f);
    EXPECT_EQ(g(v1(0.0)), 0.0);
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double xi : {1.0, 4.0, 16.0, 64.0}) {
      EXPECT_NEAR(g(v1(xi)), g(v1(-xi)), 1e-14 * g(v1(xi)));
      const double ratio = g(v1(xi)) / (xi * xi);
      EXPECT_LE(ratio, prev_ratio * (1 + 1e-9));
      prev_ratio = ratio;
    }
  }
}

TEST(Nonstationary, AgreesWithDirectFormula) {
  const auto k = nonstationary_kernel([](double r) { return std::log1p(r); });
  Vec a(2), b(2);
  a << 1.0, 2.0;
  b << -0.5, 0.25;
  EXPECT_NEAR(k(a, b), std::log1p(a.norm()) + std::log1p(b.norm()) - std::log1p((a - b).norm()), 1e-15);
}
