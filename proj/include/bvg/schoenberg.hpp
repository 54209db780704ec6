#pragma once

#include "bvg/oracle.hpp"
#include "bvg/variogram.hpp"

namespace bvg {

/// gamma_eta(xi) = gamma(xi + eta) + gamma(xi - eta) - 2 gamma(xi), a
/// covariance in xi for every variogram gamma.
Kernel difference_kernel(const Kernel& gamma, const Vec& eta);

/// phi_eta(xi) = 2 gamma(eta) + 2 gamma(xi) - gamma(xi + eta) - gamma(xi - eta),
/// a variogram in xi and in eta.
Kernel sum_kernel(const Kernel& gamma, const Vec& eta);
/// (xi, eta) -> phi_eta(xi); symmetric in its arguments.
BinaryKernel sum_kernel_binary(const Kernel& gamma);

struct ShiftKernelPair {
  Variogram base;
  Vec eta;
  Kernel difference;
  Kernel sum;
};
ShiftKernelPair make_shift_pair(const Variogram& base, const Vec& eta);

/// K(x1, x2) = g(|x1|) + g(|x2|) - g(|x1 - x2|). Throws DomainError when
/// g(0) != 0.
BinaryKernel nonstationary_kernel(const ScalarFn& g);

/// One-dimensional variogram drift xi^2 + int (1 - cos(s xi)) mu(s) ds for f
/// with Levy density m and mu = -m'. Requires every density to be
/// decreasing on a log grid and int min(s, s^2) mu(s) ds to be finite; when
/// f has a complex extension the result is cross-checked against
/// -Re(i xi f(i xi)).
Variogram spectral_variogram(const FunctionExpr& f);

}  // namespace bvg
