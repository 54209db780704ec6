#include "bvg/kriging.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "bvg/errors.hpp"

namespace bvg {

namespace {

void require_distinct(const PointSet& pts) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto less = [&](std::size_t a, std::size_t b) {
    const auto& x = pts.sites[a];
    const auto& y = pts.sites[b];
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (pts.sites[order[k]] == pts.sites[order[k - 1]])
      throw DegenerateSystemError("kriging system is singular: sites " + std::to_string(order[k - 1]) +
                                  " and " + std::to_string(order[k]) + " coincide");
  }
}

Vec gamma_to_target(const Variogram& model, const PointSet& pts, const Vec& target) {
  Vec g(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) g[i] = model(target - pts.sites[i]);
  return g;
}

}  // namespace

std::string_view to_string(SolverMode mode) { return mode == SolverMode::Dense ? "dense" : "sparse"; }

SolverMode parse_solver_mode(std::string_view name) {
  if (name == "dense") return SolverMode::Dense;
  if (name == "sparse") return SolverMode::Sparse;
  throw DomainError("unknown solver mode '" + std::string(name) + "'");
}

Eigen::SparseMatrix<double> SparseSymmetric::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(entries.size());
  for (const auto& e : entries) t.emplace_back(e.row, e.col, e.value);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Mat build_gamma_matrix(const Variogram& model, const PointSet& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = model(Vec::Zero(pts.d));
    for (Eigen::Index j = 0; j < i; ++j) g(i, j) = g(j, i) = model(pts.sites[i] - pts.sites[j]);
  }
  return g;
}

SparseSymmetric build_covariance_sparse(const Variogram& model, const PointSet& pts) {
  if (!model.support_radius || !model.sill || !std::isfinite(*model.support_radius))
    throw DomainError("sparse mode requires a model with finite support radius and a sill");
  const double radius = *model.support_radius;
  const double sill = *model.sill;
  SparseSymmetric s{.n = static_cast<int>(pts.size())};
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      const Vec diff = pts.sites[i] - pts.sites[j];
      if (i != j && (model.A * diff).norm() >= radius) continue;
      s.entries.push_back({i, j, sill - model(diff)});
    }
  }
  return s;
}

KrigingResult ordinary_kriging(const Variogram& model, const PointSet& pts, const Vec& target,
                               SolverMode mode) {
  if (pts.size() == 0) throw DomainError("kriging needs at least one site");
  if (!pts.values || pts.values->size() != pts.size())
    throw DomainError("kriging needs a value at every site");
  if (target.size() != pts.d) throw DomainError("target has wrong dimension");
  require_distinct(pts);

  const auto n = static_cast<Eigen::Index>(pts.size());
  const Vec z = Eigen::Map<const Vec>(pts.values->data(), n);
  const Vec g0 = gamma_to_target(model, pts, target);
  KrigingResult r;

  if (mode == SolverMode::Dense) {
    Mat k(n + 1, n + 1);
    k.topLeftCorner(n, n) = build_gamma_matrix(model, pts);
    k.col(n).head(n).setOnes();
    k.row(n).head(n).setOnes();
    k(n, n) = 0.0;
    Vec rhs(n + 1);
    rhs.head(n) = g0;
    rhs[n] = 1.0;
    Eigen::FullPivLU<Mat> lu(k);
    if (!lu.isInvertible()) throw DegenerateSystemError("kriging system is singular");
    const Vec sol = lu.solve(rhs);
    r.weights = sol.head(n);
    r.lagrange = sol[n];
  } else {
    const SparseSymmetric c = build_covariance_sparse(model, pts);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(c.to_eigen());
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
      throw DegenerateSystemError("sparse covariance factorization failed");
    const Vec c0 = Vec::Constant(n, *model.sill) - g0;
    const Vec x = ldlt.solve(c0);
    const Vec y = ldlt.solve(Vec::Ones(n));
    const double nu = (x.sum() - 1.0) / y.sum();
    r.weights = x - nu * y;
    r.lagrange = -nu;
  }
  r.prediction = r.weights.dot(z);
  r.variance = r.weights.dot(g0) + r.lagrange;
  return r;
}

SimulationResult simulate_field(const SimulationSpec& spec) {
  if (spec.replicates < 1) throw DomainError("simulate_field: replicates must be positive");
  const Mat k = kernel_matrix(spec.model.kernel(), spec.sites);
  const auto n = k.rows();
  const double scale = matrix_scale(k);

  Eigen::SelfAdjointEigenSolver<Mat> es(k, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -spec.tol * scale)
    throw NumericalError("simulate_field: covariance matrix is not positive semidefinite");

  SimulationResult out;
  Eigen::LLT<Mat> llt(k);
  double shift = std::numeric_limits<double>::epsilon() * scale * static_cast<double>(n);
  while (llt.info() != Eigen::Success) {
    if (shift > spec.tol * scale)
      throw NumericalError("simulate_field: Cholesky failed after diagonal shift");
    llt.compute(k + shift * Mat::Identity(n, n));
    out.shift = shift;
    shift *= 2.0;
  }
  const Mat l = llt.matrixL();

  out.values.resize(spec.replicates, n);
  const auto run = [&](int begin, int end) {
    Vec e(n);
    for (int r = begin; r < end; ++r) {
      std::mt19937_64 rng(spec.seed + static_cast<std::uint64_t>(r));
      std::normal_distribution<double> normal;
      for (Eigen::Index i = 0; i < n; ++i) e[i] = normal(rng);
      out.values.row(r) = (l * e).transpose();
    }
  };
  const int threads = std::clamp(spec.threads, 1, spec.replicates);
  if (threads == 1) {
    run(0, spec.replicates);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (spec.replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int b = t * chunk;
      const int e = std::min(spec.replicates, b + chunk);
      if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<VariogramBin> empirical_variogram(const Mat& replicates, const PointSet& pts,
                                              const std::vector<double>& edges) {
  if (edges.size() < 2) throw DomainError("empirical_variogram: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw DomainError("empirical_variogram: edges must increase");
  if (replicates.cols() != static_cast<Eigen::Index>(pts.size()))
    throw DomainError("empirical_variogram: replicate width does not match the site count");

  const std::size_t nb = edges.size() - 1;
  std::vector<double> acc(nb, 0.0);
  std::vector<VariogramBin> bins(nb);
  for (std::size_t b = 0; b < nb; ++b) bins[b] = {edges[b], edges[b + 1], 0, std::nullopt};

  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double lag = (pts.sites[i] - pts.sites[j]).norm();
      if (lag < edges.front() || lag > edges.back()) continue;
      auto it = std::upper_bound(edges.begin(), edges.end(), lag);
      std::size_t b = static_cast<std::size_t>(it - edges.begin()) - 1;
      if (b == nb) b = nb - 1;
      const auto diff = replicates.col(i) - replicates.col(j);
      acc[b] += 0.5 * diff.squaredNorm();
      ++bins[b].count;
    }
  }
  for (std::size_t b = 0; b < nb; ++b)
    if (bins[b].count > 0)
      bins[b].gamma_hat = acc[b] / (static_cast<double>(bins[b].count) * replicates.rows());
  return bins;
}

void write_variogram_csv(std::ostream& out, const std::vector<VariogramBin>& bins) {
  const auto prec = out.precision(17);
  out << "lag_lo,lag_hi,count,gamma_hat\n";
  for (const auto& b : bins) {
    out << b.lo << ',' << b.hi << ',' << b.count << ',';
    if (b.gamma_hat) out << *b.gamma_hat;
    else out << "NA";
    out << '\n';
  }
  out.precision(prec);
}

}  // namespace bvg
