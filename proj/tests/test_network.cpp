#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gfnoma/errors.hpp"
#include "gfnoma/network.hpp"
#include "gfnoma/rng.hpp"
#include "gfnoma/specfun.hpp"
#include "test_util.hpp"

using gfnoma::ConfigError;
using gfnoma::NetworkConfig;
using gfnoma::RngStream;

TEST_CASE("default config validates") {
    CHECK_NOTHROW(testutil::table1().validate());
}

TEST_CASE("config invariants are enforced") {
    auto broken = [](auto mutate) {
        NetworkConfig cfg = testutil::table1();
        mutate(cfg);
        return cfg;
    };
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.d0_m = 200.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.d0_m = -1.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.alpha = 2.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.n_devices = 120; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.p_act = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.p_act = 1.5; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.c1 = 1.5; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.c3 = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.noise_w = 0.0; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.m_subbands = 7; }).validate(),
                    ConfigError);
    CHECK_THROWS_AS(broken([](NetworkConfig& c) { c.eps_tail = 1.0; }).validate(),
                    ConfigError);
}

TEST_CASE("activity intensity") {
    NetworkConfig cfg = testutil::table1();
    CHECK(cfg.intensity() == doctest::Approx(24.0).epsilon(1e-15));

    cfg.p_act = 0.0;  // product only; validation would reject this config
    CHECK(cfg.intensity() == 0.0);

    cfg.n_devices = 1000;
    cfg.p_act = 0.05;
    CHECK(cfg.intensity() == doctest::Approx(50.0).epsilon(1e-15));
}

TEST_CASE("dbm conversions") {
    CHECK(gfnoma::dbm_to_watts(20.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(gfnoma::dbm_to_watts(-110.0) == doctest::Approx(1e-14).epsilon(1e-12));
    CHECK(gfnoma::watts_to_dbm(gfnoma::dbm_to_watts(14.5)) ==
          doctest::Approx(14.5).epsilon(1e-12));
}

TEST_CASE("annulus distance distribution") {
    const NetworkConfig cfg = testutil::table1();
    CHECK(gfnoma::distance_cdf(cfg, cfg.d0_m) == 0.0);
    CHECK(gfnoma::distance_cdf(cfg, cfg.d1_m) == 1.0);
    CHECK(gfnoma::distance_cdf(cfg, 100.0) ==
          doctest::Approx(9900.0 / 22400.0).epsilon(1e-12));

    // The pdf integrates back to the cdf.
    const double mass = gfnoma::specfun::integrate_adaptive(
        [&cfg](double r) { return gfnoma::distance_pdf(cfg, r); }, cfg.d0_m,
        100.0);
    CHECK(mass == doctest::Approx(gfnoma::distance_cdf(cfg, 100.0)).epsilon(1e-10));

    CHECK_THROWS_AS(gfnoma::distance_cdf(cfg, 5.0), ConfigError);
    CHECK_THROWS_AS(gfnoma::distance_cdf(cfg, 151.0), ConfigError);
    CHECK_THROWS_AS(gfnoma::distance_pdf(cfg, 5.0), ConfigError);
}

TEST_CASE("negligible intensity draws no devices") {
    NetworkConfig cfg = testutil::table1();
    cfg.p_act = 1e-15;
    RngStream rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto real = gfnoma::sample_realization(cfg, rng);
        CHECK(real.k_active == 0);
        CHECK(real.ids.empty());
    }
}

TEST_CASE("realization sampling is deterministic in the seed") {
    const NetworkConfig cfg = testutil::table1();
    RngStream a(5, 3, 9), b(5, 3, 9);
    const auto ra = gfnoma::sample_realization(cfg, a);
    const auto rb = gfnoma::sample_realization(cfg, b);
    CHECK(ra.k_active == rb.k_active);
    CHECK(ra.ids == rb.ids);
    CHECK(ra.r_m == rb.r_m);
    CHECK(ra.xi == rb.xi);
}

TEST_CASE("realization identities are distinct and bounded") {
    NetworkConfig cfg = testutil::table1();
    cfg.n_devices = 121;  // validation floor: N > M
    cfg.p_act = 1.0;
    RngStream rng(17);
    for (int i = 0; i < 300; ++i) {
        auto real = gfnoma::sample_realization(cfg, rng);
        CHECK(real.k_active <= cfg.n_devices);
        std::sort(real.ids.begin(), real.ids.end());
        CHECK(std::adjacent_find(real.ids.begin(), real.ids.end()) ==
              real.ids.end());
        if (!real.ids.empty()) {
            CHECK(real.ids.front() >= 0);
            CHECK(real.ids.back() < cfg.n_devices);
        }
    }
}

TEST_CASE("sampled activity and distances match the model") {
    const NetworkConfig cfg = testutil::table1();
    const int draws = 100000;
    RngStream rng(2024);

    double k_sum = 0.0;
    std::vector<double> radii;
    radii.reserve(draws * 24);
    std::vector<int> k_hist(80, 0);
    bool radii_in_range = true;
    for (int i = 0; i < draws; ++i) {
        const auto real = gfnoma::sample_realization(cfg, rng);
        k_sum += real.k_active;
        k_hist[std::min<int>(real.k_active, 79)]++;
        for (double r : real.r_m)
            radii_in_range = radii_in_range && r >= cfg.d0_m && r <= cfg.d1_m;
        radii.insert(radii.end(), real.r_m.begin(), real.r_m.end());
    }
    CHECK(radii_in_range);

    const double lambda = cfg.intensity();
    CHECK(std::abs(k_sum / draws - lambda) <= 3.0 * std::sqrt(lambda / draws));

    // Kolmogorov-Smirnov distance of the radius sample against the closed cdf.
    std::sort(radii.begin(), radii.end());
    double ks = 0.0;
    const double n = static_cast<double>(radii.size());
    for (size_t i = 0; i < radii.size(); ++i) {
        const double model = gfnoma::distance_cdf(cfg, radii[i]);
        const double hi = (i + 1) / n;
        const double lo = i / n;
        ks = std::max({ks, std::abs(hi - model), std::abs(model - lo)});
    }
    CHECK(ks < 0.01);

    // Chi-square against the Poisson pmf, pooling bins to keep expected
    // counts above 5; the p-value comes from the regularized upper gamma.
    std::vector<double> expected(k_hist.size(), 0.0);
    double pmf = std::exp(-lambda);
    double tail = 1.0;
    for (size_t k = 0; k + 1 < expected.size(); ++k) {
        if (k > 0) pmf *= lambda / static_cast<double>(k);
        expected[k] = pmf * draws;
        tail -= pmf;
    }
    expected.back() = std::max(tail, 0.0) * draws;

    double chi2 = 0.0;
    int dof = -1;  // one constraint: totals match
    double pool_obs = 0.0, pool_exp = 0.0;
    for (size_t k = 0; k < expected.size(); ++k) {
        pool_obs += k_hist[k];
        pool_exp += expected[k];
        if (pool_exp >= 5.0) {
            chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
            dof++;
            pool_obs = pool_exp = 0.0;
        }
    }
    if (pool_exp > 0.0)
        chi2 += (pool_obs - pool_exp) * (pool_obs - pool_exp) / pool_exp;
    REQUIRE(dof > 5);
    const double p_value =
        gfnoma::specfun::upper_inc_gamma(0.5 * dof, 0.5 * chi2) /
        std::tgamma(0.5 * dof);
    CHECK(p_value > 0.01);
}

TEST_CASE("received power follows the inverse power law") {
    NetworkConfig cfg = testutil::table1();
    CHECK(gfnoma::received_power(cfg, 10.0, 0.0) == 0.0);
    CHECK(gfnoma::received_power(cfg, 10.0, 1.0) ==
          doctest::Approx(1e-5).epsilon(1e-12));
    const double base = gfnoma::received_power(cfg, 40.0, 1.3);
    CHECK(gfnoma::received_power(cfg, 80.0, 1.3) ==
          doctest::Approx(base / 16.0).epsilon(1e-12));
    CHECK(gfnoma::received_power(cfg, 40.0, 2.6) ==
          doctest::Approx(2.0 * base).epsilon(1e-12));
    cfg.tx_power_w *= 3.0;
    CHECK(gfnoma::received_power(cfg, 40.0, 1.3) ==
          doctest::Approx(3.0 * base).epsilon(1e-12));
}
