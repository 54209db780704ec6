#include "bvg/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bvg/errors.hpp"
#include "bvg/special.hpp"

namespace bvg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using P = std::span<const double>;
using C = std::complex<double>;

ParamSpec open_pos(std::string name, double def) { return {std::move(name), 0.0, kInf, true, true, def}; }
ParamSpec unit_open(std::string name, double def) { return {std::move(name), 0.0, 1.0, true, true, def}; }
ParamSpec unit_half_open(std::string name, double def) { return {std::move(name), 0.0, 1.0, true, false, def}; }

TagSet fixed(TagSet t) { return t; }

std::vector<AtomSpec> build_catalog() {
  std::vector<AtomSpec> cat;

  // -- Spatial-statistics Bernstein classes ---------------------------------
  cat.push_back({
      .name = "matern",
      .formula = "1 - 2^(1-nu)/Gamma(nu) (alpha sqrt x)^nu K_nu(alpha sqrt x)",
      .group = "spatial",
      .anchor = "Matern class",
      .params = {open_pos("alpha", 1.0), open_pos("nu", 0.5)},
      .tags = [](P) { return fixed({ClassTag::BF}); },
      .eval = [](P p, double x) { return special::matern_variogram(p[0], p[1], x); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "cauchy",
      .formula = "1 - (1 + x^alpha)^(-beta)",
      .group = "spatial",
      .anchor = "Cauchy class",
      .params = {unit_half_open("alpha", 0.5), open_pos("beta", 1.0)},
      .tags = [](P) { return fixed({ClassTag::BF}); },
      .eval = [](P p, double x) { return -std::expm1(-p[1] * std::log1p(std::pow(x, p[0]))); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "dagum",
      .formula = "(x^rho / (1 + x^rho))^gamma",
      .group = "spatial",
      .anchor = "Dagum class",
      .params = {unit_open("rho", 0.5), unit_open("gamma", 0.5)},
      .tags = [](P) { return fixed({ClassTag::BF}); },
      .eval = [](P p, double x) { return std::pow(1.0 / (1.0 + std::pow(x, -p[0])), p[1]); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "exp_one_minus",
      .formula = "1 - exp(-a x)",
      .group = "spatial",
      .anchor = "exponential variogram",
      .params = {{"a", 0.0, kInf, false, true, 1.0}},
      .tags = [](P) { return fixed({ClassTag::BF}); },
      .eval = [](P p, double x) { return -std::expm1(-p[0] * x); },
      .at_zero = [](P) { return 0.0; },
      .levy =
          [](P p) {
            LevyTriple t;
            if (p[0] > 0.0) t.atoms.push_back({p[0], 1.0});
            return std::optional<LevyTriple>(t);
          },
      .eval_complex = [](P p, C z) { return 1.0 - std::exp(-p[0] * z); },
  });
  cat.push_back({
      .name = "spherical",
      .formula = "1.5 (x/range) - 0.5 (x/range)^3 for x <= range, 1 beyond",
      .group = "spatial",
      .anchor = "spherical model",
      .params = {open_pos("range", 1.0)},
      .tags = [](P) { return TagSet{}; },
      .eval =
          [](P p, double x) {
            const double h = x / p[0];
            return h >= 1.0 ? 1.0 : 1.5 * h - 0.5 * h * h * h;
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "wendland",
      .formula = "(1 - x/r)_+^l",
      .group = "spatial",
      .anchor = "Wendland class",
      .params = {open_pos("r", 1.0), {"l", 1.0, kInf, false, true, 1.0, true}},
      .tags = [](P) { return TagSet{}; },
      .eval =
          [](P p, double x) {
            const double u = 1.0 - x / p[0];
            return u <= 0.0 ? 0.0 : std::pow(u, p[1]);
          },
      .at_zero = [](P) { return 1.0; },
  });

  // -- Classical complete Bernstein functions -------------------------------
  cat.push_back({
      .name = "power",
      .formula = "x^a",
      .group = "cbf",
      .anchor = "fractional power",
      .params = {unit_half_open("a", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P p, double x) { return std::pow(x, p[0]); },
      .at_zero = [](P) { return 0.0; },
      .levy =
          [](P p) {
            LevyTriple t;
            if (p[0] == 1.0) {
              t.alpha = 1.0;
            } else {
              t.densities.push_back(catalog(
                  "gamma_density",
                  {{"c", p[0] / std::tgamma(1.0 - p[0])}, {"p", -1.0 - p[0]}, {"b", 0.0}}));
            }
            return std::optional<LevyTriple>(t);
          },
      .eval_complex = [](P p, C z) { return std::pow(z, p[0]); },
  });
  cat.push_back({
      .name = "log1p",
      .formula = "log(1 + x)",
      .group = "cbf",
      .anchor = "logarithm",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P, double x) { return std::log1p(x); },
      .at_zero = [](P) { return 0.0; },
      .levy =
          [](P) {
            LevyTriple t;
            t.densities.push_back(catalog("gamma_density", {{"c", 1.0}, {"p", -1.0}, {"b", 1.0}}));
            return std::optional<LevyTriple>(t);
          },
      .eval_complex = [](P, C z) { return std::log(1.0 + z); },
  });
  cat.push_back({
      .name = "lambda_ratio",
      .formula = "lambda x / (lambda + x)",
      .group = "cbf",
      .anchor = "rational CBF",
      .params = {open_pos("lambda", 1.0)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P p, double x) { return p[0] * x / (p[0] + x); },
      .at_zero = [](P) { return 0.0; },
      .levy =
          [](P p) {
            LevyTriple t;
            t.densities.push_back(
                catalog("gamma_density", {{"c", p[0] * p[0]}, {"p", 0.0}, {"b", p[0]}}));
            return std::optional<LevyTriple>(t);
          },
      .eval_complex = [](P p, C z) { return p[0] * z / (p[0] + z); },
  });
  cat.push_back({
      .name = "sqrt_arctan",
      .formula = "sqrt(x) arctan(1/sqrt(x))",
      .group = "cbf",
      .anchor = "arctangent CBF",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P, double x) {
            const double s = std::sqrt(x);
            return s * std::atan(1.0 / s);
          },
      .at_zero = [](P) { return 0.0; },
      .eval_complex =
          [](P, C z) {
            const C s = std::sqrt(z);
            return s * std::atan(1.0 / s);
          },
  });

  // -- Complete Bernstein table (row-major) ---------------------------------
  cat.push_back({
      .name = "cbf_cauchy",
      .formula = "1 - (1 + x^alpha)^(-beta)",
      .group = "cbf_table",
      .anchor = "CBF table row 1 left",
      .params = {unit_half_open("alpha", 0.5), unit_half_open("beta", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P p, double x) { return -std::expm1(-p[1] * std::log1p(std::pow(x, p[0]))); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "e_power",
      .formula = "e x - x (1 + 1/x)^x - x/(x + 1)",
      .group = "cbf_table",
      .anchor = "CBF table row 1 right",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P, double x) {
            // x (1+1/x)^x = e x exp(u), u = x log1p(1/x) - 1
            const double u = special::log1p_minus_id_over(1.0 / x);
            return x * (-std::numbers::e * std::expm1(u) - 1.0 / (1.0 + x));
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "cbf_dagum",
      .formula = "(x^rho / (1 + x^rho))^gamma",
      .group = "cbf_table",
      .anchor = "CBF table row 2 left",
      .params = {unit_open("rho", 0.5), unit_open("gamma", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P p, double x) { return std::pow(1.0 / (1.0 + std::pow(x, -p[0])), p[1]); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "log_ratio",
      .formula = "1/a - (1/x) log(1 + x/a)",
      .group = "cbf_table",
      .anchor = "CBF table row 2 right",
      .params = {open_pos("a", 1.0)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval = [](P p, double x) { return special::one_minus_log1p_ratio(x / p[0]) / p[0]; },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "power_ratio",
      .formula = "(x^alpha - x (1 + x)^(alpha-1)) / ((1 + x)^alpha - x^alpha)",
      .group = "cbf_table",
      .anchor = "CBF table row 3 left",
      .params = {unit_open("alpha", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P p, double x) {
            // Divide through by x^alpha: -expm1((alpha-1) L) / expm1(alpha L), L = log1p(1/x).
            const double l = std::log1p(1.0 / x);
            return -std::expm1((p[0] - 1.0) * l) / std::expm1(p[0] * l);
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "sqrt_tanh",
      .formula = "sqrt(x/2) sinh^2(sqrt(2x)) / sinh(2 sqrt(2x))",
      .group = "cbf_table",
      .anchor = "CBF table row 3 right",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      // sinh^2(u) / sinh(2u) = tanh(u) / 2
      .eval = [](P, double x) { return 0.5 * std::sqrt(0.5 * x) * std::tanh(std::sqrt(2.0 * x)); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "sqrt_exp",
      .formula = "sqrt(x) (1 - exp(-2 a sqrt(x)))",
      .group = "cbf_table",
      .anchor = "CBF table row 4 left",
      .params = {open_pos("a", 1.0)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P p, double x) {
            const double s = std::sqrt(x);
            return -s * std::expm1(-2.0 * p[0] * s);
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "gamma_inc",
      .formula = "x^(1-nu) exp(a x) Gamma(nu; a x)",
      .group = "cbf_table",
      .anchor = "CBF table row 4 right",
      .params = {open_pos("a", 1.0), unit_open("nu", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P p, double x) {
            return std::pow(x, 1.0 - p[1]) * special::scaled_upper_gamma(p[1], p[0] * x);
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "shifted_sqrt_exp",
      .formula = "x (1 - exp(-2 sqrt(x + a))) / sqrt(x + a)",
      .group = "cbf_table",
      .anchor = "CBF table row 5 left",
      .params = {open_pos("a", 1.0)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P p, double x) {
            const double s = std::sqrt(x + p[0]);
            return -x * std::expm1(-2.0 * s) / s;
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "gamma_inc_inverse",
      .formula = "x^nu exp(a/x) Gamma(nu; a/x)",
      .group = "cbf_table",
      .anchor = "CBF table row 5 right",
      .params = {open_pos("a", 1.0), unit_open("nu", 0.5)},
      .tags = [](P) { return fixed({ClassTag::CBF}); },
      .eval =
          [](P p, double x) {
            return std::pow(x, p[1]) * special::scaled_upper_gamma(p[1], p[0] / x);
          },
      .at_zero = [](P) { return 0.0; },
  });

  // -- Completely monotone and Stieltjes atoms ------------------------------
  cat.push_back({
      .name = "exp_neg",
      .formula = "exp(-a x)",
      .group = "cm",
      .anchor = "Laplace transform of a point mass",
      .params = {open_pos("a", 1.0)},
      .tags = [](P) { return fixed({ClassTag::CM}); },
      .eval = [](P p, double x) { return std::exp(-p[0] * x); },
      .at_zero = [](P) { return 1.0; },
      .eval_complex = [](P p, C z) { return std::exp(-p[0] * z); },
  });
  cat.push_back({
      .name = "cm_pole_example",
      .formula = "1 / (x (1 + x^2))",
      .group = "cm",
      .anchor = "completely monotone, not Stieltjes",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::CM}); },
      .eval = [](P, double x) { return 1.0 / (x * (1.0 + x * x)); },
      .at_zero = [](P) { return kInf; },
  });
  cat.push_back({
      .name = "reciprocal",
      .formula = "1 / x",
      .group = "cm",
      .anchor = "Stieltjes transform of a point mass at 0",
      .params = {},
      .tags = [](P) { return fixed({ClassTag::S}); },
      .eval = [](P, double x) { return 1.0 / x; },
      .at_zero = [](P) { return kInf; },
      .eval_complex = [](P, C z) { return 1.0 / z; },
  });
  cat.push_back({
      .name = "gamma_density",
      .formula = "c x^p exp(-b x)",
      .group = "cm",
      .anchor = "Levy density family",
      .params = {open_pos("c", 1.0),
                 {"p", -kInf, kInf, true, true, -1.0},
                 {"b", 0.0, kInf, false, true, 1.0}},
      .tags = [](P p) { return p[1] <= 0.0 ? fixed({ClassTag::CM}) : TagSet{}; },
      .eval = [](P p, double x) { return p[0] * std::exp(p[1] * std::log(x) - p[2] * x); },
      .at_zero =
          [](P p) {
            if (p[1] < 0.0) return kInf;
            return p[1] == 0.0 ? p[0] : 0.0;
          },
  });

  // -- Auxiliary atoms (untagged unless trivially so) -----------------------
  cat.push_back({
      .name = "constant",
      .formula = "c",
      .group = "auxiliary",
      .anchor = "nonnegative constant",
      .params = {{"c", 0.0, kInf, false, true, 1.0}},
      .tags = [](P) { return fixed({ClassTag::CM, ClassTag::S, ClassTag::BF, ClassTag::CBF}); },
      .eval = [](P p, double) { return p[0]; },
      .at_zero = [](P p) { return p[0]; },
      .levy =
          [](P p) {
            LevyTriple t;
            t.beta = p[0];
            return std::optional<LevyTriple>(t);
          },
      .eval_complex = [](P p, C) { return C(p[0], 0.0); },
  });
  cat.push_back({
      .name = "monomial",
      .formula = "x^p",
      .group = "auxiliary",
      .anchor = "unrestricted power",
      .params = {open_pos("p", 2.0)},
      .tags = [](P) { return TagSet{}; },
      .eval = [](P p, double x) { return std::pow(x, p[0]); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "sin",
      .formula = "sin(x)",
      .group = "auxiliary",
      .anchor = "negative example",
      .params = {},
      .tags = [](P) { return TagSet{}; },
      .eval = [](P, double x) { return std::sin(x); },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "cos",
      .formula = "cos(omega x)",
      .group = "auxiliary",
      .anchor = "cosine covariance",
      .params = {open_pos("omega", 1.0)},
      .tags = [](P) { return TagSet{}; },
      .eval = [](P p, double x) { return std::cos(p[0] * x); },
      .at_zero = [](P) { return 1.0; },
  });
  cat.push_back({
      .name = "one_minus_cos",
      .formula = "1 - cos(omega x)",
      .group = "auxiliary",
      .anchor = "periodic variogram",
      .params = {open_pos("omega", 1.0)},
      .tags = [](P) { return TagSet{}; },
      .eval =
          [](P p, double x) {
            const double s = std::sin(0.5 * p[0] * x);
            return 2.0 * s * s;
          },
      .at_zero = [](P) { return 0.0; },
  });
  cat.push_back({
      .name = "nugget",
      .formula = "1 at 0, 0 elsewhere",
      .group = "auxiliary",
      .anchor = "white noise covariance",
      .params = {},
      .tags = [](P) { return TagSet{}; },
      .eval = [](P, double) { return 0.0; },
      .at_zero = [](P) { return 1.0; },
  });
  return cat;
}

}  // namespace

bool ParamSpec::admits(double v) const {
  if (!std::isfinite(v)) return false;
  if (lo_open ? !(v > lo) : !(v >= lo)) return false;
  if (hi_open ? !(v < hi) : !(v <= hi)) return false;
  if (integer && v != std::floor(v)) return false;
  return true;
}

std::string ParamSpec::range_str() const {
  std::ostringstream os;
  auto num = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    std::ostringstream s;
    s << v;
    return s.str();
  };
  os << (lo_open ? "(" : "[") << num(lo) << ", " << num(hi) << (hi_open ? ")" : "]");
  if (integer) os << " integer";
  return os.str();
}

const std::vector<AtomSpec>& atom_catalog() {
  static const std::vector<AtomSpec> cat = build_catalog();
  return cat;
}

const AtomSpec* find_atom(std::string_view name) {
  const auto& cat = atom_catalog();
  auto it = std::find_if(cat.begin(), cat.end(), [&](const AtomSpec& a) { return a.name == name; });
  return it == cat.end() ? nullptr : &*it;
}

std::vector<std::string> cbf_table_names() {
  std::vector<std::string> out;
  for (const auto& a : atom_catalog())
    if (a.group == "cbf_table") out.push_back(a.name);
  return out;
}

FunctionExpr catalog_default(std::string_view name) {
  const AtomSpec* spec = find_atom(name);
  if (spec == nullptr) throw DomainError("unknown atom '" + std::string(name) + "'");
  ParamMap params;
  for (const auto& p : spec->params) params[p.name] = p.default_value;
  return catalog(name, params);
}

}  // namespace bvg
