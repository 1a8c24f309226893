#pragma once

#include <functional>

namespace gfnoma::specfun {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

// Adaptive Gauss-Kronrod (G7,K15) panel quadrature of f over [lo, hi].
// Panels are bisected worst-error-first until the summed error estimate
// meets max(abs_tol, rel_tol*|result|). Throws ConvergenceError when the
// subdivision budget is exhausted, ConfigError on bad bounds/tolerances.
double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, const QuadratureSpec& spec = {});

// Integral of f over [lo, inf) via the substitution t = u/(1-u).
double integrate_to_inf(const std::function<double(double)>& f, double lo,
                        const QuadratureSpec& spec = {});

}  // namespace gfnoma::specfun
