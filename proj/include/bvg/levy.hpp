#pragma once

#include <functional>

#include "bvg/function_expr.hpp"

namespace bvg {

/// alpha x + beta + int (1 - exp(-x t)) nu(dt). Point masses are summed
/// exactly; densities are integrated over t = exp(u) in panels, target
/// relative accuracy 1e-10. Throws NumericalError on non-convergence.
double levy_eval(const LevyTriple& triple, double x);

/// int t / (1 + t) nu(dt); finite for a valid Levy measure.
double levy_integrability(const LevyTriple& triple);

/// Throws DomainError unless alpha, beta >= 0, masses and locations are
/// positive, densities are nonnegative on a grid and the integrability
/// integral is finite.
void validate_levy(const LevyTriple& triple);

/// mu(s) = -m'(s): closed form for the gamma_density atom, central
/// differences otherwise.
double levy_mu_density(const FunctionExpr& m, double s);

/// drift r^2 + sum over densities of int_0^inf (1 - cos(s r)) mu(s) ds.
double spectral_eval(const LevyTriple& triple, double r);

namespace quad {

/// int_lo^hi fn(t) dt over [lo, hi] subset of (0, inf), evaluated in
/// u = log t with panels of width `panel`. fn must be finite on the range.
double log_panels(const std::function<double(double)>& fn, double lo, double hi,
                  double panel = 4.0);

/// Adaptive Gauss-Kronrod on a finite interval; throws on non-convergence.
double finite(const std::function<double(double)>& fn, double a, double b, double rel_tol = 1e-12);

}  // namespace quad

}  // namespace bvg
