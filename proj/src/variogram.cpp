#include "bvg/variogram.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bvg/errors.hpp"

namespace bvg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_matrix(const Mat& A, int d) {
  if (d < 1) throw DomainError("dimension must be positive");
  if (A.rows() != d || A.cols() != d) {
    std::ostringstream os;
    os << "anisotropy must be " << d << "x" << d << ", got " << A.rows() << "x" << A.cols();
    throw DomainError(os.str());
  }
  if (!A.allFinite()) throw DomainError("anisotropy has non-finite entries");
}

double radial_arg(const Mat& A, const Vec& xi, ArgumentMode mode) {
  if (xi.size() != A.cols()) throw DomainError("argument has wrong dimension");
  const double r2 = (A * xi).squaredNorm();
  return mode == ArgumentMode::SquaredNorm ? r2 : std::sqrt(r2);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Every certified construction in this file rests on one of two facts: a BF
// profile in squared-norm mode is a variogram in every dimension, and so is
// f(|xi|) = (f o sqrt)(|xi|^2) for BF f since sqrt is BF.
void certify_from_tags(Variogram& v) {
  if (v.profile.has(ClassTag::BF)) {
    v.certified = true;
    v.max_dim.reset();
  } else {
    v.certified = false;
    v.notes.push_back("unverified: profile " + v.profile.str() + " carries no BF tag");
  }
}

}  // namespace

std::string_view to_string(ArgumentMode mode) {
  return mode == ArgumentMode::SquaredNorm ? "squared_norm" : "norm";
}

ArgumentMode parse_argument_mode(std::string_view name) {
  if (name == "squared_norm") return ArgumentMode::SquaredNorm;
  if (name == "norm") return ArgumentMode::Norm;
  throw DomainError("unknown argument mode '" + std::string(name) + "'");
}

double Variogram::operator()(const Vec& xi) const { return eval(profile, radial_arg(A, xi, mode)); }

double Variogram::radial(double r) const {
  return eval(profile, mode == ArgumentMode::SquaredNorm ? r * r : r);
}

double Variogram::squared_profile(double x) const {
  return eval(profile, mode == ArgumentMode::SquaredNorm ? x : std::sqrt(x));
}

bool Variogram::certified_in(int dim) const { return certified && (!max_dim || dim <= *max_dim); }

Kernel Variogram::kernel() const {
  return [v = *this](const Vec& xi) { return v(xi); };
}

double StationaryCovariance::operator()(const Vec& xi) const {
  return eval(profile, radial_arg(A, xi, mode));
}

double StationaryCovariance::radial(double r) const {
  return eval(profile, mode == ArgumentMode::SquaredNorm ? r * r : r);
}

Kernel StationaryCovariance::kernel() const {
  return [c = *this](const Vec& xi) { return c(xi); };
}

Variogram make_variogram(const FunctionExpr& f, const Mat& A, int d, ArgumentMode mode) {
  check_matrix(A, d);
  try {
    (void)eval(f, 0.0);
  } catch (const std::exception& e) {
    throw DomainError(std::string("make_variogram: profile must be defined on [0,inf): ") +
                      e.what());
  }
  Variogram v{.profile = f, .mode = mode, .A = A, .d = d};
  v.construction = "make_variogram(" + f.str() + ", " + std::string(to_string(mode)) + ")";
  certify_from_tags(v);
  return v;
}

Variogram ma_product(double a1, double a2, const Mat& A, int d) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0) || !std::isfinite(a1) || !std::isfinite(a2))
    throw ParameterGateError("ma_product: rates must be finite and nonnegative");
  const auto g1 = catalog("exp_one_minus", {{"a", a1}});
  const auto g2 = catalog("exp_one_minus", {{"a", a2}});
  Variogram v = make_variogram(schur(g1, g2, 0.5, 0.5), A, d, ArgumentMode::SquaredNorm);
  v.construction = "ma_product(a1=" + fmt(a1) + ", a2=" + fmt(a2) + ")";
  return v;
}

Variogram schur_product_extended(const FunctionExpr& g1, const FunctionExpr& g2, double alpha,
                                 double beta, const Mat& A, int d, bool allow_unverified) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
    throw ParameterGateError("schur_product_extended: alpha and beta must lie in [0,1]");
  const bool gate = alpha + beta <= 1.0;
  if (!gate && !allow_unverified)
    throw ParameterGateError("schur_product_extended: alpha + beta = " + fmt(alpha + beta) +
                             " exceeds the bound alpha + beta <= 1");
  Variogram v = make_variogram(schur(g1, g2, alpha, beta), A, d, ArgumentMode::SquaredNorm);
  v.construction = "schur_product_extended(" + g1.str() + ", " + g2.str() + ", alpha=" +
                   fmt(alpha) + ", beta=" + fmt(beta) + ")";
  if (!gate) {
    v.certified = false;
    v.notes.push_back("unverified: alpha + beta > 1");
  }
  return v;
}

Variogram variogram_from_covariance(const StationaryCovariance& c) {
  Variogram v{.profile = complement(c.sill, c.profile), .mode = c.mode, .A = c.A, .d = c.d};
  v.certified = c.certified;
  v.max_dim = c.max_dim;
  v.construction = "variogram_from_covariance(" + c.construction + ")";
  v.notes = c.notes;
  v.sill = c.sill;
  if (std::isfinite(c.support_radius)) v.support_radius = c.support_radius;
  return v;
}

StationaryCovariance wendland(double r, int l, int d) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterGateError("wendland: r must be positive");
  if (d < 1) throw ParameterGateError("wendland: d must be positive");
  const int bound = d / 2 + 1;
  if (l < bound) {
    std::ostringstream os;
    os << "wendland: l = " << l << " violates l >= floor(d/2) + 1 = " << bound << " for d = " << d;
    throw ParameterGateError(os.str());
  }
  StationaryCovariance c{.profile = catalog("wendland", {{"r", r}, {"l", double(l)}}),
                         .mode = ArgumentMode::Norm,
                         .A = Mat::Identity(d, d),
                         .d = d,
                         .sill = 1.0,
                         .support_radius = r,
                         .certified = true,
                         .max_dim = 2 * l - 1};
  c.construction = "wendland(r=" + fmt(r) + ", l=" + std::to_string(l) + ", d=" +
                   std::to_string(d) + ")";
  return c;
}

Variogram spherical(double range, int d) {
  if (!(range > 0.0) || !std::isfinite(range))
    throw ParameterGateError("spherical: range must be positive");
  Variogram v = make_variogram(catalog("spherical", {{"range", range}}), Mat::Identity(d, d), d,
                               ArgumentMode::Norm);
  v.notes.clear();
  v.construction = "spherical(range=" + fmt(range) + ")";
  v.certified = d <= 3;
  v.max_dim = 3;
  if (d > 3) v.notes.push_back("unverified: spherical model is certified for d <= 3");
  v.sill = 1.0;
  v.support_radius = range;
  return v;
}

StationaryCovariance spherical_covariance(double range, int d) {
  const Variogram v = spherical(range, d);
  StationaryCovariance c{.profile = complement(1.0, v.profile),
                         .mode = ArgumentMode::Norm,
                         .A = v.A,
                         .d = d,
                         .sill = 1.0,
                         .support_radius = range,
                         .certified = v.certified,
                         .max_dim = 3};
  c.construction = "spherical_covariance(range=" + fmt(range) + ")";
  c.notes = v.notes;
  return c;
}

StationaryCovariance exponential_covariance(double scale, int d) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParameterGateError("exponential: scale must be positive");
  // exp(-t/scale) = exp(-(t^2)^(1/2)/scale): CM composed with BF, so PD in every d.
  StationaryCovariance c{.profile = catalog("exp_neg", {{"a", 1.0 / scale}}),
                         .mode = ArgumentMode::Norm,
                         .A = Mat::Identity(d, d),
                         .d = d,
                         .sill = 1.0,
                         .support_radius = kInf,
                         .certified = true};
  c.construction = "exponential_covariance(scale=" + fmt(scale) + ")";
  return c;
}

StationaryCovariance cosine_covariance(double omega) {
  StationaryCovariance c{.profile = catalog("cos", {{"omega", omega}}),
                         .mode = ArgumentMode::Norm,
                         .A = Mat::Identity(1, 1),
                         .d = 1,
                         .sill = 1.0,
                         .support_radius = kInf,
                         .certified = true,
                         .max_dim = 1};
  c.construction = "cosine_covariance(omega=" + fmt(omega) + ")";
  return c;
}

StationaryCovariance nugget_covariance(int d) {
  StationaryCovariance c{.profile = catalog("nugget"),
                         .mode = ArgumentMode::Norm,
                         .A = Mat::Identity(d, d),
                         .d = d,
                         .sill = 1.0,
                         .support_radius = 0.0,
                         .certified = true};
  c.construction = "nugget";
  return c;
}

std::string_view to_string(CbfVariogram which) {
  switch (which) {
    case CbfVariogram::Ratio: return "ratio";
    case CbfVariogram::InvArg: return "inv_arg";
    case CbfVariogram::InvArgRatio: return "inv_arg_ratio";
  }
  return "?";
}

CbfVariogram parse_cbf_variogram(std::string_view name) {
  if (name == "ratio") return CbfVariogram::Ratio;
  if (name == "inv_arg") return CbfVariogram::InvArg;
  if (name == "inv_arg_ratio") return CbfVariogram::InvArgRatio;
  throw DomainError("unknown cbf variogram '" + std::string(name) + "'");
}

Variogram cbf_variograms(const FunctionExpr& g, CbfVariogram which, int d) {
  const auto sigma = catalog("reciprocal");
  FunctionExpr profile = g;
  switch (which) {
    case CbfVariogram::Ratio: profile = dualize(g, DualRule::XOverF); break;
    case CbfVariogram::InvArg: profile = compose(sigma, compose(g, sigma)); break;
    case CbfVariogram::InvArgRatio:
      profile = dualize(compose(sigma, compose(g, sigma)), DualRule::XOverF);
      break;
  }
  Variogram v = make_variogram(profile, Mat::Identity(d, d), d, ArgumentMode::SquaredNorm);
  v.construction = "cbf_variograms(" + g.str() + ", " + std::string(to_string(which)) + ")";
  return v;
}

std::string_view to_string(CompositionProduct which) {
  return which == CompositionProduct::TwoFactor ? "two_factor" : "three_factor";
}

CompositionProduct parse_composition_product(std::string_view name) {
  if (name == "two_factor") return CompositionProduct::TwoFactor;
  if (name == "three_factor") return CompositionProduct::ThreeFactor;
  throw DomainError("unknown composition product '" + std::string(name) + "'");
}

Variogram composition_products(const FunctionExpr& g1, const FunctionExpr& g2,
                               const std::optional<FunctionExpr>& g3, CompositionProduct which,
                               int d) {
  FunctionExpr h = catalog("power", {{"a", 1.0}});
  if (which == CompositionProduct::ThreeFactor) {
    if (!g3) throw DomainError("composition_products: three_factor needs g3");
    h = *g3;
  }
  Variogram v = make_variogram(uchiyama(h, g1, g2), Mat::Identity(d, d), d,
                               ArgumentMode::SquaredNorm);
  v.construction = "composition_products(" + std::string(to_string(which)) + ", " + g1.str() +
                   ", " + g2.str() + (g3 ? ", " + g3->str() : std::string()) + ")";
  return v;
}

std::vector<std::pair<std::string, StationaryCovariance>> covariance_catalog(int d) {
  std::vector<std::pair<std::string, StationaryCovariance>> out;
  out.emplace_back("wendland", wendland(1.5, d / 2 + 1, d));
  out.emplace_back("wendland_smooth", wendland(2.0, d / 2 + 3, d));
  out.emplace_back("exponential", exponential_covariance(1.0, d));
  if (d <= 3) out.emplace_back("spherical", spherical_covariance(2.0, d));
  if (d == 1) out.emplace_back("cosine", cosine_covariance(1.0));
  out.emplace_back("nugget", nugget_covariance(d));
  return out;
}

std::vector<std::pair<std::string, Variogram>> variogram_catalog(int d) {
  const Mat I = Mat::Identity(d, d);
  const auto sq = ArgumentMode::SquaredNorm;
  std::vector<std::pair<std::string, Variogram>> out;
  out.emplace_back("exponential", make_variogram(catalog("exp_one_minus"), I, d, ArgumentMode::Norm));
  out.emplace_back("gaussian", make_variogram(catalog("exp_one_minus"), I, d, sq));
  out.emplace_back("linear", make_variogram(catalog("power", {{"a", 0.5}}), I, d, sq));
  out.emplace_back("quadratic", make_variogram(catalog("power", {{"a", 1.0}}), I, d, sq));
  out.emplace_back("matern", make_variogram(catalog("matern", {{"alpha", 1.0}, {"nu", 1.5}}), I, d, sq));
  out.emplace_back("cauchy", make_variogram(catalog("cauchy", {{"alpha", 0.5}, {"beta", 1.0}}), I, d, sq));
  out.emplace_back("dagum", make_variogram(catalog("dagum", {{"rho", 0.5}, {"gamma", 0.5}}), I, d, sq));
  out.emplace_back("log1p", make_variogram(catalog("log1p"), I, d, sq));
  out.emplace_back("ma_product", ma_product(1.0, 2.0, I, d));
  if (d <= 3) out.emplace_back("spherical", spherical(1.5, d));
  out.emplace_back("wendland", variogram_from_covariance(wendland(1.5, d / 2 + 1, d)));
  if (d == 1) out.emplace_back("cosine", variogram_from_covariance(cosine_covariance(1.0)));
  return out;
}

}  // namespace bvg
