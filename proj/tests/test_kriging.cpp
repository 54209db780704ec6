#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/kriging.hpp"
#include "support/oracles.hpp"

using namespace bvg;

namespace {

Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

PointSet with_values(PointSet p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<double> vals(p.size());
  for (auto& v : vals) v = n(rng);
  p.values = vals;
  return p;
}

}  // namespace

TEST(Sparse, PairCountMatchesBruteForce) {
  const auto g = variogram_from_covariance(wendland(0.8, 2, 1));
  const auto p = PointSet::random(40, 1, 0, 10, 3);
  std::vector<double> x;
  for (const auto& s : p.sites) x.push_back(s[0]);
  const auto sp = build_covariance_sparse(g, p);
  EXPECT_EQ(sp.entries.size(), p.size() + 2 * oracle::pairs_within(x, 0.8));
  for (std::size_t k = 1; k < sp.entries.size(); ++k) {
    const auto& a = sp.entries[k - 1];
    const auto& b = sp.entries[k];
    EXPECT_TRUE(a.row < b.row || (a.row == b.row && a.col < b.col));
  }
  EXPECT_THROW(build_covariance_sparse(make_variogram(catalog("log1p"), Mat::Identity(1, 1), 1), p),
               DomainError);
}

TEST(Kriging, ThreeSitesByHand) {
  // gamma(h) = |h| on sites 0, 1, 3 and target 2.
  const auto g = make_variogram(catalog("power", {{"a", 0.5}}), Mat::Identity(1, 1), 1);
  PointSet p = PointSet::from_rows({{0.0}, {1.0}, {3.0}});
  p.values = std::vector<double>{1.0, 2.0, 4.0};
  const auto r = ordinary_kriging(g, p, v1(2.0));
  // Substitute w3 = 1 - w1 - w2 to get a 3x3 system in (w1, w2, mu).
  const double G[3][3] = {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
  const double g0[3] = {2, 1, 1};
  double a[3][3], b[3];
  for (int i = 0; i < 3; ++i) {
    a[i][0] = G[i][0] - G[i][2];
    a[i][1] = G[i][1] - G[i][2];
    a[i][2] = 1;
    b[i] = g0[i] - G[i][2];
  }
  const auto s = oracle::solve3(a, b);
  EXPECT_NEAR(r.weights[0], s[0], 1e-12);
  EXPECT_NEAR(r.weights[1], s[1], 1e-12);
  EXPECT_NEAR(r.weights[2], 1 - s[0] - s[1], 1e-12);
  EXPECT_NEAR(r.lagrange, s[2], 1e-12);
  EXPECT_NEAR(r.prediction, s[0] * 1 + s[1] * 2 + (1 - s[0] - s[1]) * 4, 1e-12);
  EXPECT_NEAR(r.variance, s[0] * 2 + s[1] * 1 + (1 - s[0] - s[1]) * 1 + s[2], 1e-12);
}

TEST(Kriging, ExactnessAndUnbiasedness) {
  const auto g = variogram_from_covariance(wendland(1.2, 3, 2));
  const auto p = with_values(PointSet::random(25, 2, 0, 3, 7), 8);
  for (std::size_t i = 0; i < p.size(); i += 6) {
    for (auto mode : {SolverMode::Dense, SolverMode::Sparse}) {
      const auto r = ordinary_kriging(g, p, p.sites[i], mode);
      EXPECT_NEAR(r.prediction, (*p.values)[i], 1e-8);
      EXPECT_NEAR(r.weights.sum(), 1.0, 1e-10);
      EXPECT_NEAR(r.variance, 0.0, 1e-8);
    }
  }
}

TEST(Kriging, SparseMatchesDense) {
  const auto g = variogram_from_covariance(wendland(1.0, 2, 1));
  const auto p = with_values(PointSet::random(30, 1, 0, 8, 12), 13);
  for (double t : {0.25, 3.3, 7.9}) {
    const auto d = ordinary_kriging(g, p, v1(t), SolverMode::Dense);
    const auto s = ordinary_kriging(g, p, v1(t), SolverMode::Sparse);
    EXPECT_LE((d.weights - s.weights).lpNorm<Eigen::Infinity>(), 1e-8);
    EXPECT_NEAR(d.prediction, s.prediction, 1e-8);
    EXPECT_NEAR(d.lagrange, s.lagrange, 1e-8);
    EXPECT_NEAR(d.variance, s.variance, 1e-8);
  }
}

TEST(Kriging, TranslationInvariant) {
  const auto g = ma_product(1.0, 0.5, Mat::Identity(2, 2), 2);
  auto p = with_values(PointSet::random(12, 2, -1, 1, 4), 5);
  Vec t(2);
  t << 0.1, 0.2;
  const auto r1 = ordinary_kriging(g, p, t);
  Vec shift(2);
  shift << 100.0, -50.0;
  for (auto& s : p.sites) s += shift;
  const auto r2 = ordinary_kriging(g, p, t + shift);
  EXPECT_NEAR(r1.prediction, r2.prediction, 1e-9);
  EXPECT_NEAR(r1.variance, r2.variance, 1e-9);
  for (Eigen::Index i = 0; i < r1.weights.size(); ++i) EXPECT_NEAR(r1.weights[i], r2.weights[i], 1e-10);
}

TEST(Kriging, DuplicateSitesRejected) {
  const auto g = ma_product(1.0, 1.0, Mat::Identity(1, 1), 1);
  PointSet p = PointSet::from_rows({{0.0}, {1.0}, {0.0}});
  p.values = std::vector<double>{1.0, 2.0, 3.0};
  EXPECT_THROW(ordinary_kriging(g, p, v1(0.5)), DegenerateSystemError);
}

TEST(Simulation, DeterministicAcrossThreads) {
  SimulationSpec spec{.model = exponential_covariance(1.0, 1),
                      .sites = PointSet::from_rows({{0.0}, {0.5}, {1.5}, {3.0}}),
                      .seed = 77,
                      .replicates = 50};
  const auto a = simulate_field(spec);
  spec.threads = 4;
  const auto b = simulate_field(spec);
  EXPECT_EQ(a.values, b.values);
  spec.seed = 78;
  EXPECT_NE(simulate_field(spec).values, a.values);
}

TEST(Simulation, EmpiricalVariogramConverges) {
  SimulationSpec spec{.model = exponential_covariance(1.0, 1),
                      .sites = PointSet::from_rows({{0.0}, {0.5}, {1.5}, {3.0}}),
                      .seed = 1,
                      .replicates = 20000,
                      .threads = 2};
  const auto sim = simulate_field(spec);
  const auto bins = empirical_variogram(sim.values, spec.sites, {0.0, 0.75, 1.25, 2.0, 4.0});
  ASSERT_EQ(bins.size(), 4u);
  // Lags: 0.5 | 1.0 | 1.5 | 2.5, 3.0
  const double want[] = {1 - std::exp(-0.5), 1 - std::exp(-1.0), 1 - std::exp(-1.5)};
  for (int k = 0; k < 3; ++k) {
    ASSERT_TRUE(bins[k].gamma_hat);
    EXPECT_NEAR(*bins[k].gamma_hat, want[k], 0.05 * want[k]);
  }
  std::ostringstream out;
  write_variogram_csv(out, empirical_variogram(sim.values, spec.sites, {0.0, 0.1, 4.0}));
  EXPECT_NE(out.str().find("NA"), std::string::npos);
}

TEST(Simulation, NuggetNeedsNoShift) {
  SimulationSpec spec{.model = nugget_covariance(1),
                      .sites = PointSet::from_rows({{0.0}, {1.0}}),
                      .replicates = 3};
  EXPECT_EQ(simulate_field(spec).shift, 0.0);
}

TEST(Simulation, RoundTripOverBoundedCatalog) {
  const auto sites = PointSet::from_rows({{0.0}, {0.4}, {1.2}});
  // Lags 0.4 | 0.8 | 1.2
  const std::vector<double> edges = {0.0, 0.6, 1.0, 1.5};
  for (const auto& [name, c] : covariance_catalog(1)) {
    SimulationSpec spec{.model = c, .sites = sites, .seed = 11, .replicates = 100000, .threads = 4};
    const auto sim = simulate_field(spec);
    const auto bins = empirical_variogram(sim.values, sites, edges);
    const auto g = variogram_from_covariance(c);
    const double lags[] = {0.4, 0.8, 1.2};
    for (int k = 0; k < 3; ++k) {
      const double want = g.radial(lags[k]);
      ASSERT_TRUE(bins[k].gamma_hat) << name;
      EXPECT_NEAR(*bins[k].gamma_hat, want, 0.1 * want) << name << " lag " << lags[k];
    }
  }
}
