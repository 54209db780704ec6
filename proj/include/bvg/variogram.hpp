#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bvg/function_expr.hpp"

namespace bvg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Kernel on R^d, evaluated at a difference vector.
using Kernel = std::function<double(const Vec&)>;

/// squared_norm: gamma(xi) = f(|A xi|^2).  norm: gamma(xi) = f(|A xi|).
enum class ArgumentMode { SquaredNorm, Norm };

std::string_view to_string(ArgumentMode mode);
ArgumentMode parse_argument_mode(std::string_view name);

/// Radial model gamma(xi) = f(|A xi|^2) or f(|A xi|).
///
/// `certified` means permissibility follows from class tags or a parameter
/// gate; `max_dim` bounds the dimensions it holds in (nullopt: every d).
/// `sill` and `support_radius` are set for eventually constant models: gamma
/// equals `sill` once |A xi| >= support_radius.
struct Variogram {
  FunctionExpr profile;
  ArgumentMode mode = ArgumentMode::SquaredNorm;
  Mat A;
  int d = 1;
  bool certified = false;
  std::optional<int> max_dim;
  std::string construction;
  std::vector<std::string> notes;
  std::optional<double> sill;
  std::optional<double> support_radius;

  double operator()(const Vec& xi) const;
  /// Value at |A xi| = r.
  [[nodiscard]] double radial(double r) const;
  /// Profile as a function of x = |A xi|^2.
  [[nodiscard]] double squared_profile(double x) const;
  [[nodiscard]] bool certified_in(int dim) const;
  [[nodiscard]] bool certified_all_dims() const { return certified && !max_dim; }
  [[nodiscard]] Kernel kernel() const;
};

/// C(xi) = f(|A xi|) (or f(|A xi|^2)) with C(0) = sill and C = 0 beyond
/// support_radius when that is finite.
struct StationaryCovariance {
  FunctionExpr profile;
  ArgumentMode mode = ArgumentMode::Norm;
  Mat A;
  int d = 1;
  double sill = 1.0;
  double support_radius = std::numeric_limits<double>::infinity();
  bool certified = false;
  std::optional<int> max_dim;
  std::string construction;
  std::vector<std::string> notes;

  double operator()(const Vec& xi) const;
  [[nodiscard]] double radial(double r) const;
  [[nodiscard]] Kernel kernel() const;
};

Variogram make_variogram(const FunctionExpr& f, const Mat& A, int d,
                         ArgumentMode mode = ArgumentMode::SquaredNorm);

/// (1 - exp(-a1 |A xi|)) (1 - exp(-a2 |A xi|)).
Variogram ma_product(double a1, double a2, const Mat& A, int d);

/// Profile g1(x^alpha) g2(x^beta) in squared-norm mode. alpha + beta > 1 is
/// rejected unless `allow_unverified`, in which case the model is built but
/// not certified.
Variogram schur_product_extended(const FunctionExpr& g1, const FunctionExpr& g2, double alpha,
                                 double beta, const Mat& A, int d, bool allow_unverified = false);

/// gamma = C(0) - C.
Variogram variogram_from_covariance(const StationaryCovariance& c);

/// (1 - |xi|/r)_+^l. Throws ParameterGateError when l < floor(d/2) + 1.
StationaryCovariance wendland(double r, int l, int d);

/// 3/2 (h/range) - 1/2 (h/range)^3 for h <= range, 1 beyond. Certified for
/// d <= 3 only.
Variogram spherical(double range, int d);
StationaryCovariance spherical_covariance(double range, int d);

/// exp(-|xi| / scale).
StationaryCovariance exponential_covariance(double scale, int d);
/// cos(omega xi), one-dimensional.
StationaryCovariance cosine_covariance(double omega);
/// 1 at the origin, 0 elsewhere.
StationaryCovariance nugget_covariance(int d);

enum class CbfVariogram { Ratio, InvArg, InvArgRatio };
std::string_view to_string(CbfVariogram which);
CbfVariogram parse_cbf_variogram(std::string_view name);

/// ratio: x / g(x).  inv_arg: 1 / g(1/x).  inv_arg_ratio: x g(1/x).
Variogram cbf_variograms(const FunctionExpr& g, CbfVariogram which, int d);

enum class CompositionProduct { TwoFactor, ThreeFactor };
std::string_view to_string(CompositionProduct which);
CompositionProduct parse_composition_product(std::string_view name);

/// two_factor: g1(x) g2(x / g1(x)).  three_factor: g3(g1(x)) g2(x / g1(x)).
Variogram composition_products(const FunctionExpr& g1, const FunctionExpr& g2,
                               const std::optional<FunctionExpr>& g3, CompositionProduct which,
                               int d);

/// Named covariance models used by the harness and the consistency tests.
std::vector<std::pair<std::string, StationaryCovariance>> covariance_catalog(int d);

/// Named variogram models, certified in dimension d.
std::vector<std::pair<std::string, Variogram>> variogram_catalog(int d);

}  // namespace bvg
