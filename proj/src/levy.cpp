#include "bvg/levy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"

namespace bvg {

namespace {

// Densities are integrated over t in [kTLo, kTHi]; outside, any Levy density
// of practical interest contributes below double precision.
constexpr double kTLo = 1e-100;
constexpr double kTHi = 1e100;

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;

  void add(const std::function<double(double)>& fn, double a, double b) {
    double err = 0.0;
    double l1_part = 0.0;
    const double v = GK::integrate(fn, a, b, 12, 1e-13, &err, &l1_part);
    if (!std::isfinite(v)) throw NumericalError("quadrature: non-finite integrand");
    value += v;
    error += err;
    l1 += l1_part;
  }

  double checked(const char* what) const {
    if (error > 1e-8 * l1 + 1e-300)
      throw NumericalError(std::string(what) + ": quadrature did not converge");
    return value;
  }
};

bool is_gamma_density(const FunctionExpr& m) {
  return m.kind() == NodeKind::Atom && m.name() == "gamma_density";
}

}  // namespace

namespace quad {

double log_panels(const std::function<double(double)>& fn, double lo, double hi, double panel) {
  const double ulo = std::log(lo);
  const double uhi = std::log(hi);
  const auto integrand = [&](double u) {
    const double t = std::exp(u);
    return fn(t) * t;
  };
  Accumulator acc;
  for (double a = ulo; a < uhi; a += panel) acc.add(integrand, a, std::min(a + panel, uhi));
  return acc.checked("log_panels");
}

double finite(const std::function<double(double)>& fn, double a, double b, double rel_tol) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = GK::integrate(fn, a, b, 15, rel_tol, &err, &l1);
  if (!std::isfinite(v) || err > 1e-8 * l1 + 1e-300)
    throw NumericalError("quadrature did not converge");
  return v;
}

}  // namespace quad

double levy_eval(const LevyTriple& triple, double x) {
  if (!(x >= 0.0)) throw DomainError("levy_eval: argument must be nonnegative");
  double v = triple.alpha * x + triple.beta;
  if (x == 0.0) return v;
  for (const auto& a : triple.atoms) v += a.mass * -std::expm1(-x * a.location);
  for (const auto& m : triple.densities) {
    v += quad::log_panels([&](double t) { return -std::expm1(-x * t) * eval(m, t); }, kTLo, kTHi);
  }
  return v;
}

double levy_integrability(const LevyTriple& triple) {
  double v = 0.0;
  for (const auto& a : triple.atoms) v += a.mass * a.location / (1.0 + a.location);
  for (const auto& m : triple.densities)
    v += quad::log_panels([&](double t) { return t / (1.0 + t) * eval(m, t); }, kTLo, kTHi);
  return v;
}

void validate_levy(const LevyTriple& triple) {
  if (!(triple.alpha >= 0.0) || !std::isfinite(triple.alpha))
    throw DomainError("Levy triple: drift alpha must be finite and >= 0");
  if (!(triple.beta >= 0.0) || !std::isfinite(triple.beta))
    throw DomainError("Levy triple: constant beta must be finite and >= 0");
  for (const auto& a : triple.atoms) {
    if (!(a.location > 0.0) || !std::isfinite(a.location))
      throw DomainError("Levy triple: atom locations must be positive and finite");
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
      throw DomainError("Levy triple: atom masses must be nonnegative and finite");
  }
  for (const auto& m : triple.densities) {
    for (int i = 0; i <= 48; ++i) {
      const double t = std::pow(10.0, -6.0 + 0.25 * i);
      if (eval(m, t) < 0.0) throw DomainError("Levy triple: density " + m.str() + " is negative");
    }
  }
  double integral = 0.0;
  try {
    integral = levy_integrability(triple);
  } catch (const std::exception& e) {
    throw DomainError(std::string("Levy triple: integrability check failed: ") + e.what());
  }
  if (!std::isfinite(integral))
    throw DomainError("Levy triple: int t/(1+t) nu(dt) is not finite");
  // The quadrature range is finite, so a divergent integral shows up as mass
  // piling into the outermost decades.
  for (const auto& m : triple.densities) {
    const auto g = [&](double t) { return t / (1.0 + t) * eval(m, t); };
    const double total = quad::log_panels(g, kTLo, kTHi);
    const double ends = quad::log_panels(g, kTLo, kTLo * 1e10) + quad::log_panels(g, kTHi * 1e-10, kTHi);
    if (ends > 1e-3 * total && ends > 1e-300)
      throw DomainError("Levy triple: int t/(1+t) nu(dt) does not converge for density " + m.str());
  }
}

double levy_mu_density(const FunctionExpr& m, double s) {
  if (is_gamma_density(m)) {
    const auto p = m.params();
    const double c = p[0], pw = p[1], b = p[2];
    return c * std::exp((pw - 1.0) * std::log(s) - b * s) * (b * s - pw);
  }
  const auto central = [&](double h) { return -(eval(m, s + h) - eval(m, s - h)) / (2.0 * h); };
  const double h = 1e-3 * s;
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double spectral_eval(const LevyTriple& triple, double r) {
  if (!triple.atoms.empty())
    throw DomainError("spectral: Levy measure must be given by a density");
  r = std::abs(r);
  double v = triple.alpha * r * r;
  if (r == 0.0) return 0.0;
  for (const auto& m : triple.densities) {
    const auto integrand = [&](double s) {
      const double h = std::sin(0.5 * s * r);
      return 2.0 * h * h * levy_mu_density(m, s);
    };
    const double s0 = std::min(1.0, 1.0 / r);
    double acc = quad::log_panels(integrand, kTLo, s0);

    // Up to a whole number of periods by Gauss-Kronrod, then
    // int_a^inf (1 - cos(s r)) mu(s) ds = m(a) - int_0^inf cos(u r) mu(a + u) du.
    const double period = 2.0 * std::numbers::pi / r;
    const double a = std::max(std::ceil(s0 / period), 1.0) * period;
    Accumulator body;
    const double width = std::min(a - s0, 4.0 * period);
    for (double lo = s0; lo < a; lo += width) body.add(integrand, lo, std::min(lo + width, a));
    thread_local boost::math::quadrature::ooura_fourier_cos<double> fourier(1e-10);
    const auto [tail, tail_err] = fourier.integrate([&](double u) { return levy_mu_density(m, a + u); }, r);
    if (!std::isfinite(tail) || tail_err > 1e-8 * (std::abs(acc) + std::abs(eval(m, a)) + std::abs(tail)) + 1e-300)
      throw NumericalError("spectral: Levy density tail did not converge");
    acc += body.checked("spectral") + eval(m, a) - tail;
    v += acc;
  }
  return v;
}

}  // namespace bvg
