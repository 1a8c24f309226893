#include "gfnoma/optimize.hpp"

#include <cmath>
#include <numbers>

#include "gfnoma/analysis.hpp"
#include "gfnoma/errors.hpp"

namespace gfnoma {

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol) {
    if (!(lo < hi) || !(x_tol > 0.0))
        throw ConfigError("golden_section_max needs lo < hi and x_tol > 0");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > x_tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

double min_arg_meeting(const std::function<double(double)>& f, double target,
                       double lo, double hi, double x_tol, bool increasing) {
    if (!(lo < hi) || !(x_tol > 0.0))
        throw ConfigError("min_arg_meeting needs lo < hi and x_tol > 0");
    const double f_lo = f(lo), f_hi = f(hi);
    if (increasing) {
        if (f_lo >= target) return lo;
        if (f_hi < target)
            throw ConvergenceError("constraint target unreachable on bracket");
    } else {
        if (f_hi >= target) return hi;
        if (f_lo < target)
            throw ConvergenceError("constraint target unreachable on bracket");
    }
    // Invariant: the "meet" end satisfies the target, the other does not.
    double fail = increasing ? lo : hi;
    double meet = increasing ? hi : lo;
    while (std::abs(meet - fail) > x_tol) {
        const double mid = 0.5 * (meet + fail);
        (f(mid) >= target ? meet : fail) = mid;
    }
    return meet;
}

OptResult optimize_ee(const NetworkConfig& cfg, double min_pper) {
    const auto ee_at = [&cfg](double p_dbm) {
        NetworkConfig c = cfg;
        c.tx_power_w = dbm_to_watts(p_dbm);
        return ee(c);
    };
    const auto pper_at = [&cfg](double p_dbm) {
        NetworkConfig c = cfg;
        c.tx_power_w = dbm_to_watts(p_dbm);
        return p_per(c);
    };
    OptResult out;
    out.arg_opt = golden_section_max(ee_at, 0.0, 30.0, 0.01);
    out.value_opt = ee_at(out.arg_opt);
    out.p_per_at_opt = pper_at(out.arg_opt);
    if (min_pper > 0.0) {
        out.has_constraint = true;
        out.constrained_arg =
            min_arg_meeting(pper_at, min_pper, 0.0, 30.0, 0.01, true);
        out.constrained_value = ee_at(out.constrained_arg);
    }
    return out;
}

OptResult optimize_apce(const NetworkConfig& cfg, double lambda0_per_m2,
                        double min_pper) {
    if (!(lambda0_per_m2 > 0.0))
        throw ConfigError("optimize_apce needs lambda0 > 0");
    const auto apce_at = [&](double d1) {
        NetworkConfig c = cfg;
        c.d1_m = d1;
        return apce(c, lambda0_per_m2);
    };
    const auto pper_at = [&](double d1) {
        NetworkConfig c = cfg;
        c.d1_m = d1;
        const double n_eff = lambda0_per_m2 * std::numbers::pi *
                             (c.d1_m * c.d1_m - c.d0_m * c.d0_m);
        return p_per_n(c, n_eff);
    };
    OptResult out;
    const double lo = cfg.d0_m + 1.0, hi = 600.0;
    out.arg_opt = golden_section_max(apce_at, lo, hi, 0.1);
    out.value_opt = apce_at(out.arg_opt);
    out.p_per_at_opt = pper_at(out.arg_opt);
    if (min_pper > 0.0) {
        out.has_constraint = true;
        out.constrained_arg =
            min_arg_meeting(pper_at, min_pper, lo, hi, 0.1, false);
        out.constrained_value = apce_at(out.constrained_arg);
    }
    return out;
}

}  // namespace gfnoma
