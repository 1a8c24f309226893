#include "gfnoma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gfnoma/aud.hpp"
#include "gfnoma/errors.hpp"
#include "gfnoma/quadrature.hpp"
#include "gfnoma/specfun.hpp"

namespace gfnoma {

namespace {

double span_sq(const NetworkConfig& cfg) {
    return cfg.d1_m * cfg.d1_m - cfg.d0_m * cfg.d0_m;
}

double log_poisson_pmf(double lambda, int k) {
    if (lambda <= 0.0)
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(n - k + 1.0);
}

double p0_n(const NetworkConfig& cfg, double n) {
    const double ups = amp_threshold_n(cfg, n);
    const double u = ups * ups / cfg.tx_power_w;
    const double a2 = 2.0 / cfg.alpha;
    const double t0 = u * std::pow(cfg.d0_m, cfg.alpha);
    const double t1 = u * std::pow(cfg.d1_m, cfg.alpha);
    const double bracket = specfun::upper_inc_gamma(a2, t0) -
                           specfun::upper_inc_gamma(a2, t1);
    const double val = 2.0 * std::pow(cfg.tx_power_w / (ups * ups), a2) /
                       (cfg.alpha * span_sq(cfg)) * bracket;
    return std::clamp(val, 0.0, 1.0);
}

// Effective sparsity cap for the Poisson sums; may exceed any practical k, in
// which case terms are cut off once negligible.
double k_max_clamped(const NetworkConfig& cfg, double n) {
    return std::max(0.0, k_max_n(cfg, n));
}

double p_per_impl(const NetworkConfig& cfg, double n) {
    if (n <= 1.0) return 1.0;
    const double lambda = n * cfg.p_act;
    const double kmax = k_max_clamped(cfg, n);
    const double p = p0_n(cfg, n);
    const double ln_p = p > 0.0 ? std::log(p) : 0.0;
    double acc = 0.0;
    for (int k = 0; static_cast<double>(k) <= kmax && k <= 200000; ++k) {
        if (p == 0.0 && k > 0) break;
        const double term = std::exp(log_poisson_pmf(lambda, k) + k * ln_p);
        acc += term;
        if (k > lambda && term < acc * 1e-18) break;
    }
    return std::min(1.0, acc);
}

// Four-term incomplete-gamma bracket shared by the missed-power expectation
// and the detected-power mean.
double gamma_bracket4(const NetworkConfig& cfg, double ups) {
    const double u = ups * ups / cfg.tx_power_w;
    const double a2 = 2.0 / cfg.alpha;
    const double t0 = u * std::pow(cfg.d0_m, cfg.alpha);
    const double t1 = u * std::pow(cfg.d1_m, cfg.alpha);
    return specfun::upper_inc_gamma(a2 - 1.0, t0) -
           specfun::upper_inc_gamma(a2 - 1.0, t1) +
           specfun::upper_inc_gamma(a2, t0) - specfun::upper_inc_gamma(a2, t1);
}

// int_lo^hi t^{a2-2} (1 - e^{-t}(1+t)) dt. Written through the gamma
// primitives this cancels by ~u^{a2-1} at realistic thresholds, so small
// limits use the alternating series of 1 - e^{-t}(1+t) = sum (-1)^n (n-1)/n! t^n
// integrated term by term.
double sub_threshold_series(double a2, double lo, double hi) {
    double acc = 0.0;
    double fact = 1.0;
    for (int n = 2; n <= 80; ++n) {
        fact *= n;
        const double p = a2 + n - 1.0;
        const double term = (n % 2 == 0 ? 1.0 : -1.0) * (n - 1.0) / fact *
                            (std::pow(hi, p) - std::pow(lo, p)) / p;
        acc += term;
        if (n > 4 && std::abs(term) < std::abs(acc) * 1e-17) break;
    }
    return acc;
}

double sub_threshold_gamma(double a2, double lo, double hi) {
    const double plain =
        (std::pow(hi, a2 - 1.0) - std::pow(lo, a2 - 1.0)) / (a2 - 1.0);
    return plain -
           (specfun::upper_inc_gamma(a2 - 1.0, lo) -
            specfun::upper_inc_gamma(a2 - 1.0, hi)) -
           (specfun::upper_inc_gamma(a2, lo) - specfun::upper_inc_gamma(a2, hi));
}

double sub_threshold_integral(double a2, double t0, double t1) {
    if (t1 <= 1.0) return sub_threshold_series(a2, t0, t1);
    if (t0 >= 1.0) return sub_threshold_gamma(a2, t0, t1);
    return sub_threshold_series(a2, t0, 1.0) + sub_threshold_gamma(a2, 1.0, t1);
}

double missed_power_mean_n(const NetworkConfig& cfg, double n) {
    const double lambda = n * cfg.p_act;
    const double ups = amp_threshold_n(cfg, n);
    const double u = ups * ups / cfg.tx_power_w;
    const double a2 = 2.0 / cfg.alpha;
    const double t0 = u * std::pow(cfg.d0_m, cfg.alpha);
    const double t1 = u * std::pow(cfg.d1_m, cfg.alpha);
    const double braces = std::pow(u, 1.0 - a2) / cfg.alpha *
                          sub_threshold_integral(a2, t0, t1);
    return std::max(0.0, 2.0 * lambda * cfg.tx_power_w / span_sq(cfg) * braces);
}

double xi_mean_n(const NetworkConfig& cfg, double n) {
    const double p = p0_n(cfg, n);
    if (p <= 0.0) throw ConvergenceError("xi_mean is undefined when P0 = 0");
    const double ups = amp_threshold_n(cfg, n);
    const double a2 = 2.0 / cfg.alpha;
    return 2.0 * std::pow(cfg.tx_power_w, a2) /
           (cfg.alpha * p * span_sq(cfg) *
            std::pow(ups, 4.0 / cfg.alpha - 2.0)) *
           gamma_bracket4(cfg, ups);
}

double mse_impl(const NetworkConfig& cfg, int j, double e1) {
    return (cfg.noise_w + e1) / (cfg.preamble_len - j - 1.0);
}

double pr_j_impl(const NetworkConfig& cfg, int j) {
    const double lambda = cfg.intensity();
    const double kmax = k_max_clamped(cfg, cfg.n_devices);
    const double p = p0_n(cfg, cfg.n_devices);
    if (static_cast<double>(j) > kmax) return 0.0;
    if (p >= 1.0) return std::exp(log_poisson_pmf(lambda, j));
    if (p <= 0.0)
        return j > 0 ? 0.0 : p_per_impl(cfg, cfg.n_devices);
    const double ln_p = std::log(p);
    const double ln_1mp = std::log1p(-p);
    double acc = 0.0;
    for (int k = j; static_cast<double>(k) <= kmax && k <= 200000; ++k) {
        const double term = std::exp(log_poisson_pmf(lambda, k) +
                                     log_choose(k, j) + j * ln_p +
                                     (k - j) * ln_1mp);
        acc += term;
        if (k > lambda + j && term < acc * 1e-18) break;
    }
    return acc;
}

}  // namespace

double p0(const NetworkConfig& cfg) { return p0_n(cfg, cfg.n_devices); }

double p_per(const NetworkConfig& cfg) {
    return p_per_impl(cfg, cfg.n_devices);
}

double p_per_n(const NetworkConfig& cfg, double n) {
    return p_per_impl(cfg, n);
}

double missed_power_mean(const NetworkConfig& cfg) {
    return missed_power_mean_n(cfg, cfg.n_devices);
}

double mse_j(const NetworkConfig& cfg, int j) {
    if (j < 1 || j > cfg.preamble_len - 4)
        throw ConfigError("mse_j needs 1 <= j <= M-4");
    return mse_impl(cfg, j, missed_power_mean(cfg));
}

double xi_mean(const NetworkConfig& cfg) {
    return xi_mean_n(cfg, cfg.n_devices);
}

double pr_j(const NetworkConfig& cfg, int j) {
    if (j < 0) throw ConfigError("pr_j needs j >= 0");
    return pr_j_impl(cfg, j);
}

double avg_nmse(const NetworkConfig& cfg) {
    const double xm = xi_mean(cfg);
    const double e1 = missed_power_mean(cfg);
    const double kmax = k_max_clamped(cfg, cfg.n_devices);
    const int j_hi = static_cast<int>(
        std::min(kmax, static_cast<double>(cfg.preamble_len - 2)));
    double acc = 0.0;
    for (int j = 1; j <= j_hi; ++j)
        acc += mse_impl(cfg, j, e1) * pr_j_impl(cfg, j);
    return acc / xm;
}

double q_of_s(const NetworkConfig& cfg, double s) {
    if (!(s > 0.0)) throw ConfigError("q_of_s needs s > 0");
    const double ms2 = cfg.preamble_len * cfg.noise_w;
    const double c = ms2 / (s * cfg.tx_power_w);
    const double b = 2.0 / cfg.alpha + 1.0;
    const double g1 = specfun::gauss_2f1_one(b, -c * std::pow(cfg.d1_m, cfg.alpha));
    const double g0 = specfun::gauss_2f1_one(b, -c * std::pow(cfg.d0_m, cfg.alpha));
    const double q = 2.0 * c / (span_sq(cfg) * (cfg.alpha + 2.0)) *
                     (std::pow(cfg.d1_m, cfg.alpha + 2.0) * g1 -
                      std::pow(cfg.d0_m, cfg.alpha + 2.0) * g0);
    return std::clamp(q, 0.0, 1.0);
}

double rate_tail_split(const NetworkConfig& cfg) {
    double ln_lo = std::log(1e-12), ln_hi = std::log(1e16);
    if (q_of_s(cfg, std::exp(ln_lo)) <= cfg.eps_tail ||
        q_of_s(cfg, std::exp(ln_hi)) >= cfg.eps_tail)
        throw ConvergenceError("rate tail split not bracketed");
    for (int it = 0; it < 200 && ln_hi - ln_lo > 1e-13; ++it) {
        const double mid = 0.5 * (ln_lo + ln_hi);
        (q_of_s(cfg, std::exp(mid)) > cfg.eps_tail ? ln_lo : ln_hi) = mid;
    }
    return std::exp(0.5 * (ln_lo + ln_hi));
}

double avg_rate(const NetworkConfig& cfg) {
    if (cfg.alpha <= 2.0) throw ConfigError("avg_rate needs alpha > 2");
    const double ms2 = cfg.preamble_len * cfg.noise_w;
    const double lambda = cfg.intensity();
    const int kmax = static_cast<int>(
        std::min(k_max_clamped(cfg, cfg.n_devices), 200000.0));

    std::vector<double> w(kmax + 1, 0.0);
    double w_total = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        w[k] = std::exp(log_poisson_pmf(lambda, k));
        w_total += w[k];
    }

    const double e1 = missed_power_mean(cfg);
    const double e_psi = 2.0 * cfg.tx_power_w *
                         (std::pow(cfg.d0_m, 2.0 - cfg.alpha) -
                          std::pow(cfg.d1_m, 2.0 - cfg.alpha)) /
                         ((cfg.alpha - 2.0) * span_sq(cfg) * ms2);
    double limit0 = 0.0;
    for (int k = 1; k <= kmax; ++k) limit0 += w[k] * k * e_psi;

    const double s0 = rate_tail_split(cfg);
    const double s_lin = 1e-6 / (e_psi * std::max(1, kmax));

    const auto integrand = [&](double s) {
        if (s <= s_lin) return limit0 * std::exp(-s);
        const double q = q_of_s(cfg, s);
        if (q >= 1.0) return limit0 * std::exp(-s);
        double sum = 0.0;
        if (q <= 0.0) {
            sum = w_total;
        } else {
            const double ln_q = std::log(q);
            for (int k = 1; k <= kmax; ++k)
                sum += w[k] * (-std::expm1(k * ln_q));
        }
        return std::exp(-s) / s * sum;
    };

    specfun::QuadratureSpec qspec;
    qspec.abs_tol = 1e-12;
    qspec.rel_tol = 1e-9;
    qspec.max_subdivisions = 40000;
    const double head = specfun::integrate_adaptive(integrand, 0.0, s0, qspec);
    const double tail = -specfun::exp_integral_ei(-s0) * w_total;

    return (head + tail - std::log1p(e1 / ms2)) / std::numbers::ln2;
}

double avg_power_dev(const NetworkConfig& cfg) {
    return (1.0 - cfg.p_act) * cfg.p_static_w +
           cfg.p_act * (2.0 * cfg.p_dynamic_w + cfg.tx_power_w / cfg.antenna_eff);
}

double ee(const NetworkConfig& cfg) {
    return cfg.intensity() * p_per(cfg) /
           (cfg.n_devices * avg_power_dev(cfg));
}

double apce(const NetworkConfig& cfg, double lambda0_per_m2) {
    if (!(lambda0_per_m2 > 0.0)) throw ConfigError("apce needs lambda0 > 0");
    const double n_eff = lambda0_per_m2 * std::numbers::pi * span_sq(cfg);
    return n_eff * p_per_impl(cfg, n_eff);
}

AnalyticalReport analyze(const NetworkConfig& cfg, double lambda0_per_m2) {
    cfg.validate();
    AnalyticalReport rep;
    rep.p0 = p0(cfg);
    rep.p_per = p_per(cfg);
    rep.k_max = k_max(cfg);
    rep.amp_threshold = amp_threshold(cfg);
    const double e1 = missed_power_mean(cfg);
    const int j_hi = std::min(rep.k_max, cfg.preamble_len - 4);
    for (int j = 1; j <= j_hi; ++j)
        rep.mse_by_j.emplace_back(j, mse_impl(cfg, j, e1));
    rep.avg_nmse = avg_nmse(cfg);
    rep.xi_mean = xi_mean(cfg);
    rep.avg_rate = avg_rate(cfg);
    rep.p_dev_bar = avg_power_dev(cfg);
    rep.ee = ee(cfg);
    if (lambda0_per_m2 > 0.0) {
        rep.apce = apce(cfg, lambda0_per_m2);
    } else {
        rep.apce = cfg.n_devices * rep.p_per;
    }
    return rep;
}

}  // namespace gfnoma
