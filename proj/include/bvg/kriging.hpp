#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "bvg/oracle.hpp"
#include "bvg/variogram.hpp"

namespace bvg {

enum class SolverMode { Dense, Sparse };
std::string_view to_string(SolverMode mode);
SolverMode parse_solver_mode(std::string_view name);

struct Triplet {
  int row;
  int col;
  double value;
};

/// Coordinate triplets in row-major order.
struct SparseSymmetric {
  int n = 0;
  std::vector<Triplet> entries;

  [[nodiscard]] Eigen::SparseMatrix<double> to_eigen() const;
};

/// Gamma_ij = gamma(xi_i - xi_j).
Mat build_gamma_matrix(const Variogram& model, const PointSet& pts);

/// C_ij = sill - gamma(xi_i - xi_j) stored for |A(xi_i - xi_j)| < support
/// radius only. Throws DomainError when the model has no finite support.
SparseSymmetric build_covariance_sparse(const Variogram& model, const PointSet& pts);

struct KrigingResult {
  double prediction = 0.0;
  Vec weights;
  /// mu in [Gamma 1; 1^T 0][w; mu] = [gamma_0; 1].
  double lagrange = 0.0;
  double variance = 0.0;
};

/// Ordinary kriging at `target`. Sparse mode solves the equivalent covariance
/// system C w - nu 1 = c_0 with a sparse LDL^T of C and a scalar Schur
/// complement for the border; mu = -nu. Throws DegenerateSystemError for
/// duplicate sites or a singular system.
KrigingResult ordinary_kriging(const Variogram& model, const PointSet& pts, const Vec& target,
                               SolverMode mode = SolverMode::Dense);

struct SimulationSpec {
  StationaryCovariance model;
  PointSet sites;
  std::uint64_t seed = 0;
  int replicates = 1;
  int threads = 1;
  double tol = kDefaultTol;
};

struct SimulationResult {
  /// replicates x sites.
  Mat values;
  /// Diagonal shift added before the Cholesky factorization.
  double shift = 0.0;
};

/// Replicate r draws its normals from mt19937_64(seed + r), so the output is
/// independent of the thread count.
SimulationResult simulate_field(const SimulationSpec& spec);

struct VariogramBin {
  double lo;
  double hi;
  std::size_t count;
  std::optional<double> gamma_hat;
};

/// Mean of (Z_i - Z_j)^2 / 2 over replicates and site pairs i < j with lag in
/// [lo, hi); the last bin is closed. `edges` must be increasing.
std::vector<VariogramBin> empirical_variogram(const Mat& replicates, const PointSet& pts,
                                              const std::vector<double>& edges);

/// lag_lo,lag_hi,count,gamma_hat with NA for empty bins.
void write_variogram_csv(std::ostream& out, const std::vector<VariogramBin>& bins);

}  // namespace bvg
