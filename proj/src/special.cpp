#include "bvg/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "bvg/errors.hpp"

namespace bvg::special {

double matern_variogram(double alpha, double nu, double x) {
  const double z = alpha * std::sqrt(x);
  if (z == 0.0) return 0.0;
  if (z < 1e-30) {
    // Leading term of the small-argument expansion.
    if (nu > 1.0) return z * z / (4.0 * (nu - 1.0));
    if (nu == 1.0) return -0.5 * z * z * (std::log(0.5 * z) + std::numbers::egamma - 0.5);
    return std::tgamma(1.0 - nu) / std::tgamma(1.0 + nu) * std::pow(0.5 * z, 2.0 * nu);
  }
  if (z > 745.0) return 1.0;
  const double k = boost::math::cyl_bessel_k(nu, z);
  const double scaled = std::exp((1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) + nu * std::log(z)) * k;
  const double value = 1.0 - scaled;
  return value < 0.0 ? 0.0 : value;
}

double scaled_upper_gamma(double nu, double z) {
  if (z < 0.0) throw DomainError("scaled_upper_gamma: negative argument");
  if (z < 1.0) return boost::math::tgamma(nu, z) * std::exp(z);
  // Modified Lentz evaluation of the continued fraction for
  // Gamma(nu, z) = exp(-z) z^nu / (z + 1 - nu - 1(1-nu)/(z + 3 - nu - ...)).
  constexpr double kTiny = 1e-300;
  double b = z + 1.0 - nu;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - nu);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(nu * std::log(z)) * h;
  }
  throw NumericalError("scaled_upper_gamma: continued fraction did not converge");
}

double log1p_minus_id_over(double y) {
  if (std::abs(y) < 0.1) {
    // sum_{k>=2} (-1)^(k+1) y^(k-1) / k
    double term = y;
    double acc = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double sign = (k % 2 == 0) ? -1.0 : 1.0;
      acc += sign * term / k;
      term *= y;
    }
    return acc;
  }
  return (std::log1p(y) - y) / y;
}

double one_minus_log1p_ratio(double t) {
  if (std::abs(t) < 0.1) {
    // sum_{k>=1} (-1)^(k+1) t^k / (k+1)
    double term = t;
    double acc = 0.0;
    for (int k = 1; k < 40; ++k) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      acc += sign * term / (k + 1);
      term *= t;
    }
    return acc;
  }
  return 1.0 - std::log1p(t) / t;
}

}  // namespace bvg::special
