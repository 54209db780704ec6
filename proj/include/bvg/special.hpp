#pragma once

namespace bvg::special {

/// 1 - 2^(1-nu)/Gamma(nu) z^nu K_nu(z), z = alpha sqrt(x).
double matern_variogram(double alpha, double nu, double x);

/// exp(z) * Gamma(nu, z) with Gamma(nu, z) the upper incomplete gamma function.
double scaled_upper_gamma(double nu, double z);

/// (log(1 + y) - y) / y, accurate for small y.
double log1p_minus_id_over(double y);

/// 1 - log(1 + t) / t, accurate for small t.
double one_minus_log1p_ratio(double t);

}  // namespace bvg::special
