#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bvg/variogram.hpp"
#include "json.hpp"

namespace bvg {

using BinaryKernel = std::function<double(const Vec&, const Vec&)>;
using ScalarFn = std::function<double(double)>;

struct PointSet {
  int d = 1;
  std::vector<Vec> sites;
  std::optional<std::vector<double>> values;
  std::vector<std::string> ids;

  [[nodiscard]] std::size_t size() const { return sites.size(); }

  /// n sites uniform in [lo, hi]^d, drawn with mt19937_64(seed).
  static PointSet random(std::size_t n, int d, double lo, double hi, std::uint64_t seed);
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  /// Header `x1,...,xd[,value]`, one site per row. Throws ParseError.
  static PointSet read_csv(std::istream& in);
  static PointSet read_csv_file(const std::string& path);
  void write_csv(std::ostream& out) const;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  /// Worst value of the tested quantity, in the units of `tolerance`.
  double statistic = 0.0;
  double tolerance = 0.0;
  nlohmann::json witness;
  std::string note;
};

/// Fail dominates inconclusive, which dominates pass.
struct PermissibilityReport {
  Verdict verdict = Verdict::Pass;
  std::vector<CheckResult> checks;
  std::optional<std::uint64_t> seed;

  void add(CheckResult c);
  void merge(const PermissibilityReport& other);
  [[nodiscard]] bool passed() const { return verdict == Verdict::Pass; }
  [[nodiscard]] const CheckResult* find(std::string_view name) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr double kDefaultTol = 1e-8;

/// Max-abs entry of a matrix, or 1 when it vanishes.
double matrix_scale(const Mat& m);

/// Gamma_ij = gamma(xi_i - xi_j). Propagates evaluation errors.
Mat kernel_matrix(const Kernel& k, const PointSet& pts);
Mat kernel_matrix(const BinaryKernel& k, const PointSet& pts);

/// Orthonormal basis (n x (n-1)) of {a : sum a = 0}, from e_i - e_n.
Mat contrast_basis(int n);

/// Passes iff the largest eigenvalue of the symmetric part of Gamma on the
/// contrast subspace is <= tol * max|Gamma_ij|. Fail witness: the top
/// eigenvector as a contrast a with sum a = 0 and the value a^T Gamma a.
PermissibilityReport cnd_check(const Kernel& gamma, const PointSet& pts, double tol = kDefaultTol);
PermissibilityReport cnd_check_matrix(const Mat& gamma, double tol = kDefaultTol);

/// Passes iff the smallest eigenvalue of C_ij is >= -tol * max|C_ij|.
PermissibilityReport pd_check(const Kernel& c, const PointSet& pts, double tol = kDefaultTol);
PermissibilityReport pd_check(const BinaryKernel& k, const PointSet& pts, double tol = kDefaultTol);
PermissibilityReport pd_check_matrix(const Mat& c, double tol = kDefaultTol);

/// gamma(0) >= 0, evenness over all site differences, and cnd_check.
PermissibilityReport variogram_axioms(const Kernel& gamma, const PointSet& pts,
                                      double tol = kDefaultTol);

/// Divided difference of f over nodes x, with the sum of |terms| as the
/// rounding scale.
struct DividedDifference {
  double value;
  double scale;
};
DividedDifference divided_difference(std::span<const double> x, std::span<const double> fx);

/// (-1)^k [x_i..x_{i+k}] f >= -tol * scale for k = 0..max_order over
/// consecutive grid windows. One check per order.
PermissibilityReport cm_check(const ScalarFn& f, std::span<const double> grid, int max_order,
                              double tol = 1e-9);

/// f >= 0 on the grid and (-1)^(m-1) [x_i..x_{i+m}] f >= 0 for
/// m = 1..max_order+1, i.e. cm_check of f' up to max_order.
PermissibilityReport bernstein_check(const ScalarFn& f, std::span<const double> grid,
                                     int max_order, double tol = 1e-9);

/// Evenness, nonnegativity, decrease and convexity on a positive grid.
PermissibilityReport polya_check(const ScalarFn& phi, std::span<const double> grid,
                                 double tol = kDefaultTol);

/// Increase, concavity and subadditivity f(a+b) <= f(a) + f(b) over grid pairs.
PermissibilityReport profile_shape_check(const ScalarFn& f, std::span<const double> grid,
                                         double tol = kDefaultTol);

/// sqrt(gamma(xi+eta)) <= sqrt(gamma(xi)) + sqrt(gamma(eta)) for every
/// ordered pair of sites, including xi = eta.
PermissibilityReport sqrt_subadditivity_check(const Kernel& gamma, const PointSet& pts,
                                              double tol = kDefaultTol);

/// Smallest y != 0 along a coordinate axis with |gamma(y) - gamma(0)| <=
/// tol * scale and |gamma(xi + y) - gamma(xi)| <= 10 tol * scale on test points.
std::optional<Vec> detect_period(const Kernel& gamma, int d, double search_radius,
                                 double tol = kDefaultTol);

/// Constancy of r -> gamma on [inner, outer]. A plateau on a model certified
/// for every dimension that is not constant everywhere is a contradiction
/// and fails the check.
PermissibilityReport eventual_constancy_check(const ScalarFn& radial, double inner, double outer,
                                              bool certified_all_dims, double tol = kDefaultTol);

/// Log-spaced grid of n points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace bvg
