#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gfnoma/errors.hpp"
#include "gfnoma/rate.hpp"
#include "gfnoma/rng.hpp"
#include "test_util.hpp"

using gfnoma::NetworkConfig;
using gfnoma::Realization;
using gfnoma::RngStream;

namespace {

constexpr double kFloor = 120.0 * 1e-14;  // M sigma^2 at the reference setup

Eigen::VectorXcd coeffs(std::initializer_list<std::complex<double>> vals) {
    Eigen::VectorXcd q(static_cast<int>(vals.size()));
    int i = 0;
    for (auto v : vals) q(i++) = v;
    return q;
}

double closed_aggregate(const Eigen::VectorXcd& q,
                        const std::vector<int>& detected, double floor_w) {
    std::vector<char> det(q.size(), 0);
    for (int d : detected) det[d] = 1;
    double total = floor_w, undetected = floor_w;
    for (int i = 0; i < q.size(); ++i) {
        total += std::norm(q(i));
        if (!det[i]) undetected += std::norm(q(i));
    }
    return std::log2(total / undetected);
}

}  // namespace

TEST_CASE("single detected device gets the full-band rate") {
    const auto q = coeffs({std::complex<double>(3e-6, 4e-6)});
    const auto rates = gfnoma::sic_rates(q, {0}, kFloor);
    REQUIRE(rates.per_user.size() == 1);
    const double expect = std::log2(1.0 + std::norm(q(0)) / kFloor);
    CHECK(rates.aggregate == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rates.per_user[0].second == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("no detected devices means zero rate") {
    const auto q = coeffs({1e-6, 2e-6});
    const auto rates = gfnoma::sic_rates(q, {}, kFloor);
    CHECK(rates.aggregate == 0.0);
    CHECK(rates.per_user.empty());
}

TEST_CASE("per-user rates telescope to the aggregate closed form") {
    RngStream rng(21);
    for (int rep = 0; rep < 400; ++rep) {
        const int k = 1 + static_cast<int>(rng.uniform_int(12));
        const int j = static_cast<int>(rng.uniform_int(k + 1));
        Eigen::VectorXcd q(k);
        for (int i = 0; i < k; ++i) {
            const double mag =
                std::sqrt(kFloor) * std::pow(10.0, 3.0 * rng.uniform() - 1.0);
            q(i) = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform());
        }
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        for (int i = 0; i < j; ++i)
            std::swap(idx[i], idx[i + rng.uniform_int(k - i)]);
        const std::vector<int> detected(idx.begin(), idx.begin() + j);

        const auto rates = gfnoma::sic_rates(q, detected, kFloor);
        const double closed = closed_aggregate(q, detected, kFloor);
        CHECK(std::abs(rates.aggregate - closed) <= 1e-12 * std::max(1.0, closed));
    }
}

TEST_CASE("two-device worked example") {
    const auto q = coeffs({2.0 * std::sqrt(kFloor),
                           std::complex<double>(0.0, std::sqrt(kFloor))});
    const auto rates = gfnoma::sic_rates(q, {0, 1}, kFloor);
    REQUIRE(rates.per_user.size() == 2);
    // Strongest first: 4F against F + F, then F against F alone.
    CHECK(rates.decode_order == std::vector<int>{0, 1});
    CHECK(rates.per_user[0].second == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(rates.per_user[1].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decode order is by power and the per-user rates telescope") {
    RngStream rng(22);
    for (int rep = 0; rep < 100; ++rep) {
        const int k = 2 + static_cast<int>(rng.uniform_int(10));
        Eigen::VectorXcd q(k);
        for (int i = 0; i < k; ++i)
            q(i) = std::polar(std::sqrt(kFloor) * (1.0 + 30.0 * rng.uniform()),
                              2.0 * std::numbers::pi * rng.uniform());
        std::vector<int> all(k);
        for (int i = 0; i < k; ++i) all[i] = i;

        const auto rates = gfnoma::sic_rates(q, all, kFloor);
        double sum = 0.0;
        for (size_t j = 0; j < rates.decode_order.size(); ++j) {
            if (j > 0)
                CHECK(std::norm(q(rates.decode_order[j - 1])) >=
                      std::norm(q(rates.decode_order[j])));
            CHECK(rates.per_user[j].first == rates.decode_order[j]);
            CHECK(rates.per_user[j].second >= 0.0);
            sum += rates.per_user[j].second;
        }
        CHECK(sum == doctest::Approx(rates.aggregate).epsilon(1e-12));
    }
}

TEST_CASE("relabeling devices leaves the aggregate unchanged") {
    const auto q = coeffs({5e-7, std::complex<double>(0, 2e-6), 8e-7, 3e-7});
    const auto base = gfnoma::sic_rates(q, {0, 2}, kFloor);

    Eigen::VectorXcd perm(4);
    perm << q(2), q(3), q(0), q(1);  // devices shuffled, same detected set
    const auto shuffled = gfnoma::sic_rates(perm, {0, 2}, kFloor);
    CHECK(base.aggregate == doctest::Approx(shuffled.aggregate).epsilon(1e-12));
}

namespace {

Realization two_device_frame(int id_a, int id_b) {
    Realization real;
    real.k_active = 2;
    real.ids = {id_a, id_b};
    real.r_m = {20.0, 30.0};
    real.xi = {1.0, 1.0};
    return real;
}

}  // namespace

TEST_CASE("ofdma baseline rates") {
    NetworkConfig cfg = testutil::table1();
    const double band_noise = cfg.preamble_len * cfg.noise_w / cfg.m_subbands;
    std::vector<int> assignment(cfg.n_devices);
    for (int n = 0; n < cfg.n_devices; ++n) assignment[n] = n % cfg.m_subbands;

    SUBCASE("lone detected device") {
        Realization real;
        real.k_active = 1;
        real.ids = {14};
        real.r_m = {20.0};
        real.xi = {1.0};
        const auto q = coeffs({1e-5});
        const auto rates = gfnoma::ofdma_rates(real, q, {0}, assignment, cfg);
        const double expect =
            std::log2(1.0 + std::norm(q(0)) / band_noise) / cfg.m_subbands;
        CHECK(rates.aggregate == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("two detected devices colliding on one sub-band score zero") {
        const auto real = two_device_frame(6, 12);  // both land on band 0
        const auto q = coeffs({1e-5, 2e-5});
        const auto rates = gfnoma::ofdma_rates(real, q, {0, 1}, assignment, cfg);
        CHECK(rates.aggregate == 0.0);
        CHECK(rates.per_user[0].second == 0.0);
        CHECK(rates.per_user[1].second == 0.0);
    }

    SUBCASE("missed device on the same sub-band only interferes") {
        const auto real = two_device_frame(6, 12);
        const auto q = coeffs({1e-5, 2e-6});
        const auto rates = gfnoma::ofdma_rates(real, q, {0}, assignment, cfg);
        REQUIRE(rates.per_user.size() == 1);
        const double expect =
            std::log2(1.0 + std::norm(q(0)) / (std::norm(q(1)) + band_noise)) /
            cfg.m_subbands;
        CHECK(rates.aggregate == doctest::Approx(expect).epsilon(1e-12));
        CHECK(rates.aggregate > 0.0);
    }

    SUBCASE("dimension mismatch is rejected") {
        const auto real = two_device_frame(6, 12);
        const auto q = coeffs({1e-5});
        CHECK_THROWS_AS(gfnoma::ofdma_rates(real, q, {0}, assignment, cfg),
                        gfnoma::ConfigError);
    }
}

TEST_CASE("full-band access dominates the sub-band baseline") {
    NetworkConfig cfg = testutil::table1();
    std::vector<int> assignment(cfg.n_devices);
    for (int n = 0; n < cfg.n_devices; ++n) assignment[n] = n % cfg.m_subbands;

    RngStream rng(23);
    double noma_sum = 0.0, oma_sum = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto real = gfnoma::sample_realization(cfg, rng);
        Eigen::VectorXcd q(real.k_active);
        for (int i = 0; i < real.k_active; ++i) {
            const double amp = std::sqrt(
                gfnoma::received_power(cfg, real.r_m[i], real.xi[i]));
            q(i) = std::polar(amp, 2.0 * std::numbers::pi * rng.uniform());
        }
        std::vector<int> detected(real.k_active);
        for (int i = 0; i < real.k_active; ++i) detected[i] = i;
        noma_sum +=
            gfnoma::sic_rates(q, detected, cfg.preamble_len * cfg.noise_w).aggregate;
        oma_sum += gfnoma::ofdma_rates(real, q, detected, assignment, cfg).aggregate;
    }
    CHECK(noma_sum > oma_sum);
}

TEST_CASE("preamble pool collisions") {
    RngStream rng(24);

    SUBCASE("single device never collides") {
        for (int rep = 0; rep < 50; ++rep) {
            const auto out = gfnoma::op_preamble_collision(1, 100, rng);
            CHECK(out.collided[0] == 0);
        }
    }

    SUBCASE("two devices on a pool of 100") {
        const int trials = 10000;
        int clean = 0;
        for (int t = 0; t < trials; ++t) {
            const auto out = gfnoma::op_preamble_collision(2, 100, rng);
            if (!out.collided[0] && !out.collided[1]) clean++;
        }
        const double se = std::sqrt(0.99 * 0.01 / trials);
        CHECK(std::abs(clean / static_cast<double>(trials) - 0.99) <= 3.0 * se);
    }

    SUBCASE("birthday probability for 24 devices on 113 preambles") {
        double expect = 1.0;
        for (int i = 0; i < 24; ++i) expect *= 1.0 - i / 113.0;
        const int trials = 100000;
        int clean = 0;
        for (int t = 0; t < trials; ++t) {
            const auto out = gfnoma::op_preamble_collision(24, 113, rng);
            bool any = false;
            for (char c : out.collided) any = any || c;
            if (!any) clean++;
        }
        const double se = std::sqrt(expect * (1.0 - expect) / trials);
        CHECK(std::abs(clean / static_cast<double>(trials) - expect) <= 3.0 * se);
    }

    SUBCASE("collision flags are symmetric within a shared choice") {
        for (int rep = 0; rep < 200; ++rep) {
            const auto out = gfnoma::op_preamble_collision(8, 10, rng);
            for (int i = 0; i < 8; ++i)
                for (int j = i + 1; j < 8; ++j)
                    if (out.choices[i] == out.choices[j]) {
                        CHECK(out.collided[i] == 1);
                        CHECK(out.collided[j] == 1);
                    }
        }
    }

    SUBCASE("empty pool is rejected") {
        CHECK_THROWS_AS(gfnoma::op_preamble_collision(3, 0, rng),
                        gfnoma::ConfigError);
    }
}
