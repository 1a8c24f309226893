#include "gfnoma/specfun.hpp"

#include <cmath>
#include <limits>

#include "gfnoma/errors.hpp"

namespace gfnoma::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() * 1e4;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Regularized lower gamma P(a,x) by series, valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceError("upper_inc_gamma: series failed to converge");
}

// Regularized upper gamma Q(a,x) by modified Lentz continued fraction,
// valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceError("upper_inc_gamma: continued fraction failed to converge");
}

double upper_inc_gamma_pos(double a, double x) {
    if (x == 0.0) return std::tgamma(a);
    if (x < a + 1.0) return std::tgamma(a) * (1.0 - gamma_p_series(a, x));
    return std::tgamma(a) * gamma_q_cf(a, x);
}

// E1(z) for z > 0: series below 1, continued fraction above.
double expint_e1(double z) {
    if (z <= 1.0) {
        double sum = -kEulerGamma - std::log(z);
        double term = 1.0;
        for (int n = 1; n <= 60; ++n) {
            term *= -z / n;
            const double contrib = -term / n;
            sum += contrib;
            if (std::abs(contrib) < std::abs(sum) * kEps) break;
        }
        return sum;
    }
    double b = z + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h * std::exp(-z);
    }
    throw ConvergenceError("exp_integral_ei: continued fraction failed to converge");
}

}  // namespace

double upper_inc_gamma(double a, double x) {
    if (!std::isfinite(a) || !std::isfinite(x))
        throw ConfigError("upper_inc_gamma: non-finite input");
    if (x < 0.0) throw ConfigError("upper_inc_gamma: x must be >= 0");
    if (a > 0.0) return upper_inc_gamma_pos(a, x);
    if (x == 0.0) throw ConfigError("upper_inc_gamma: x > 0 required for a <= 0");
    if (a == 0.0) return expint_e1(x);
    return (upper_inc_gamma(a + 1.0, x) - std::exp(a * std::log(x) - x)) / a;
}

double gauss_2f1_one(double b, double x) {
    if (!(b > 0.0)) throw ConfigError("gauss_2f1_one: b must be > 0");
    if (!(x <= 0.0)) throw ConfigError("gauss_2f1_one: only the x <= 0 branch is supported");
    if (x == 0.0) return 1.0;

    QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-13;
    spec.max_subdivisions = 8000;
    if (b >= 1.0) {
        auto f = [b, x](double t) { return std::pow(t, b - 1.0) / (1.0 - x * t); };
        return b * integrate_adaptive(f, 0.0, 1.0, spec);
    }
    // For b < 1 remove the t^{b-1} endpoint singularity with t = v^{1/b}.
    auto f = [b, x](double v) { return 1.0 / (1.0 - x * std::pow(v, 1.0 / b)); };
    return integrate_adaptive(f, 0.0, 1.0, spec);
}

double exp_integral_ei(double x) {
    if (!std::isfinite(x) || x >= 0.0)
        throw ConfigError("exp_integral_ei: x < 0 required");
    return -expint_e1(-x);
}

}  // namespace gfnoma::specfun
