#include "bvg/schoenberg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bvg/errors.hpp"
#include "bvg/levy.hpp"

namespace bvg {

namespace {

// a + b - c - d, or exactly 0 when the result is below the rounding error of
// the terms. Without this a kernel that vanishes identically (the sum kernel
// of |xi|^2) produces pure noise that a relative check cannot tell apart from
// a violation.
double combine4(double a, double b, double c, double d) {
  const double v = a + b - c - d;
  const double bound = 8.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d));
  return std::abs(v) <= bound ? 0.0 : v;
}

}  // namespace

Kernel difference_kernel(const Kernel& gamma, const Vec& eta) {
  return [gamma, eta](const Vec& xi) {
    const double g = gamma(xi);
    return combine4(gamma(xi + eta), gamma(xi - eta), g, g);
  };
}

Kernel sum_kernel(const Kernel& gamma, const Vec& eta) {
  return [gamma, eta, g_eta = gamma(eta)](const Vec& xi) {
    return combine4(2.0 * g_eta, 2.0 * gamma(xi), gamma(xi + eta), gamma(xi - eta));
  };
}

BinaryKernel sum_kernel_binary(const Kernel& gamma) {
  return [gamma](const Vec& xi, const Vec& eta) {
    return combine4(2.0 * gamma(eta), 2.0 * gamma(xi), gamma(xi + eta), gamma(xi - eta));
  };
}

ShiftKernelPair make_shift_pair(const Variogram& base, const Vec& eta) {
  if (eta.size() != base.d) throw DomainError("shift has wrong dimension");
  const Kernel g = base.kernel();
  return {base, eta, difference_kernel(g, eta), sum_kernel(g, eta)};
}

BinaryKernel nonstationary_kernel(const ScalarFn& g) {
  const double g0 = g(0.0);
  if (g0 != 0.0) {
    std::ostringstream os;
    os << "nonstationary_kernel: g(0) = " << g0 << ", must vanish";
    throw DomainError(os.str());
  }
  return [g](const Vec& x1, const Vec& x2) {
    return combine4(g(x1.norm()), g(x2.norm()), g((x1 - x2).norm()), 0.0);
  };
}

Variogram spectral_variogram(const FunctionExpr& f) {
  const LevyTriple* triple = f.levy();
  if (triple == nullptr) throw DomainError("spectral_variogram: " + f.str() + " carries no Levy triple");
  if (!triple->atoms.empty())
    throw DomainError("spectral_variogram: Levy measure has point masses, a density is required");

  const auto grid = log_grid(1e-6, 1e6, 97);
  for (const auto& m : triple->densities) {
    double prev = eval(m, grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double cur = eval(m, grid[i]);
      if (cur > prev * (1.0 + 1e-12) + 1e-300) {
        std::ostringstream os;
        os << "spectral_variogram: density " << m.str() << " increases between t=" << grid[i - 1]
           << " and t=" << grid[i];
        throw DomainError(os.str());
      }
      prev = cur;
    }
    double moment = 0.0;
    try {
      // Split at the kink of min(s, s^2).
      moment = quad::log_panels([&](double s) { return s * s * levy_mu_density(m, s); }, 1e-100, 1.0) +
               quad::log_panels([&](double s) { return s * levy_mu_density(m, s); }, 1.0, 1e100);
    } catch (const std::exception& e) {
      throw DomainError(std::string("spectral_variogram: int min(s, s^2) mu(ds) check failed: ") + e.what());
    }
    if (!std::isfinite(moment))
      throw DomainError("spectral_variogram: int min(s, s^2) mu(ds) diverges");
  }

  Variogram v{.profile = spectral(f), .mode = ArgumentMode::Norm, .A = Mat::Identity(1, 1), .d = 1};
  v.certified = true;
  v.max_dim = 1;
  v.construction = "spectral_variogram(" + f.str() + ")";

  double worst = 0.0;
  bool checked = false;
  for (double xi : {0.25, 1.0, 3.0}) {
    const auto fz = eval_complex(f, {0.0, xi});
    if (!fz) break;
    checked = true;
    const double target = -(std::complex<double>(0.0, xi) * *fz).real();
    const double got = eval(v.profile, xi);
    worst = std::max(worst, std::abs(got - target) / std::max(1.0, std::abs(target)));
  }
  if (checked) {
    if (worst > 1e-6) {
      std::ostringstream os;
      os << "spectral_variogram: quadrature disagrees with -Re(i xi f(i xi)) by " << worst;
      throw NumericalError(os.str());
    }
    std::ostringstream os;
    os << "cross-checked against -Re(i xi f(i xi)), max relative difference " << worst;
    v.notes.push_back(os.str());
  }
  return v;
}

}  // namespace bvg
