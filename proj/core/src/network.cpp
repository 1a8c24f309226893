#include "gfnoma/network.hpp"

#include <cmath>
#include <string>

#include "gfnoma/errors.hpp"

namespace gfnoma {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
}

}  // namespace

void NetworkConfig::validate() const {
    require(n_devices >= 1, "n_devices must be >= 1");
    require(preamble_len >= 1, "preamble_len must be >= 1");
    require(data_symbols >= 1, "data_symbols must be >= 1");
    require(n_devices > preamble_len, "n_devices must exceed preamble_len");
    require(std::isfinite(d0_m) && d0_m > 0.0, "d0_m must be positive");
    require(std::isfinite(d1_m) && d1_m > d0_m, "d1_m must exceed d0_m");
    require(std::isfinite(alpha) && alpha > 2.0, "alpha must exceed 2");
    require(std::isfinite(noise_w) && noise_w > 0.0, "noise_dbm out of range");
    require(std::isfinite(tx_power_w) && tx_power_w > 0.0,
            "tx_power_dbm out of range");
    require(p_act > 0.0 && p_act <= 1.0, "p_act must lie in (0, 1]");
    require(std::isfinite(c1) && c1 >= 2.0, "c1 must be >= 2");
    require(std::isfinite(c2) && c2 > 0.0, "c2 must be positive");
    require(std::isfinite(c3) && c3 > 0.0, "c3 must be positive");
    require(std::isfinite(p_static_w) && p_static_w > 0.0,
            "p_static_mw must be positive");
    require(std::isfinite(p_dynamic_w) && p_dynamic_w > 0.0,
            "p_dynamic_mw must be positive");
    require(antenna_eff > 0.0 && antenna_eff <= 1.0,
            "antenna_eff must lie in (0, 1]");
    require(m_subbands >= 1 && preamble_len % m_subbands == 0,
            "m_subbands must divide preamble_len");
    require(eps_tail > 0.0 && eps_tail < 1.0, "eps_tail must lie in (0, 1)");
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

double distance_pdf(const NetworkConfig& cfg, double r) {
    if (r < cfg.d0_m || r > cfg.d1_m)
        throw ConfigError("distance_pdf: r outside [d0, d1]");
    return 2.0 * r / (cfg.d1_m * cfg.d1_m - cfg.d0_m * cfg.d0_m);
}

double distance_cdf(const NetworkConfig& cfg, double r) {
    if (r < cfg.d0_m || r > cfg.d1_m)
        throw ConfigError("distance_cdf: r outside [d0, d1]");
    return (r * r - cfg.d0_m * cfg.d0_m) /
           (cfg.d1_m * cfg.d1_m - cfg.d0_m * cfg.d0_m);
}

Realization sample_realization(const NetworkConfig& cfg, RngStream& rng) {
    Realization out;
    int k = 0;
    do {
        k = rng.poisson(cfg.intensity());
    } while (k > cfg.n_devices);
    out.k_active = k;
    out.ids.resize(k);
    out.r_m.resize(k);
    out.xi.resize(k);

    // Partial Fisher-Yates over [0, N) gives k distinct device indices.
    std::vector<int> pool(cfg.n_devices);
    for (int i = 0; i < cfg.n_devices; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        const int j = i + rng.uniform_int(cfg.n_devices - i);
        std::swap(pool[i], pool[j]);
        out.ids[i] = pool[i];
    }

    const double d0sq = cfg.d0_m * cfg.d0_m;
    const double span = cfg.d1_m * cfg.d1_m - d0sq;
    for (int i = 0; i < k; ++i) {
        out.r_m[i] = std::sqrt(d0sq + rng.uniform() * span);
        out.xi[i] = rng.exponential();
    }
    return out;
}

double received_power(const NetworkConfig& cfg, double r, double xi) {
    return cfg.tx_power_w * xi * std::pow(r, -cfg.alpha);
}

}  // namespace gfnoma
