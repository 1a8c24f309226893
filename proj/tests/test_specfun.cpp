#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gfnoma/errors.hpp"
#include "gfnoma/specfun.hpp"

using gfnoma::ConfigError;
using gfnoma::ConvergenceError;
namespace sf = gfnoma::specfun;

TEST_CASE("upper incomplete gamma reference points") {
    CHECK(sf::upper_inc_gamma(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(sf::upper_inc_gamma(2.5, 0.0) ==
          doctest::Approx(std::tgamma(2.5)).epsilon(1e-12));
    CHECK(sf::upper_inc_gamma(2.5, 0.0) == doctest::Approx(1.3293403881791370).epsilon(1e-12));

    // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)) gives an independent libm oracle.
    const double g_half_1 = std::sqrt(std::numbers::pi) * std::erfc(1.0);
    CHECK(sf::upper_inc_gamma(0.5, 1.0) == doctest::Approx(g_half_1).epsilon(1e-12));

    const double g_neg_half_1 = (g_half_1 - std::exp(-1.0)) / (-0.5);
    CHECK(sf::upper_inc_gamma(-0.5, 1.0) == doctest::Approx(g_neg_half_1).epsilon(1e-12));
    CHECK(sf::upper_inc_gamma(-0.5, 1.0) == doctest::Approx(0.17814771178156086).epsilon(1e-10));

    // a = 0 falls back to E1(x) = -Ei(-x).
    CHECK(sf::upper_inc_gamma(0.0, 1.0) ==
          doctest::Approx(-sf::exp_integral_ei(-1.0)).epsilon(1e-13));
}

TEST_CASE("upper incomplete gamma matches its defining integral") {
    for (double a : {0.5, 1.0, 1.7, 2.5, 4.0}) {
        for (double x : {0.2, 1.0, 3.0, 8.0}) {
            const double oracle = sf::integrate_to_inf(
                [a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x);
            CHECK(sf::upper_inc_gamma(a, x) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("upper incomplete gamma recurrence identity") {
    const std::vector<double> as = {-1.7, -1.2, -0.5, -0.1, 0.3, 0.7,
                                    1.0,  1.5,  2.2,  3.0,  3.8};
    const std::vector<double> xs = {0.1, 0.35, 0.8, 1.5, 2.7, 4.0, 6.5, 9.0, 12.0};
    for (double a : as) {
        for (double x : xs) {
            const double lhs =
                a * sf::upper_inc_gamma(a, x) + std::pow(x, a) * std::exp(-x);
            const double rhs = sf::upper_inc_gamma(a + 1.0, x);
            const double scale =
                std::max({1e-300, std::abs(rhs), std::pow(x, a) * std::exp(-x)});
            CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("upper incomplete gamma is decreasing in x") {
    for (double a : {0.4, 1.0, 2.5}) {
        double prev = sf::upper_inc_gamma(a, 0.01);
        for (double x = 0.5; x < 12.0; x += 0.5) {
            const double cur = sf::upper_inc_gamma(a, x);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("upper incomplete gamma rejects bad input") {
    CHECK_THROWS_AS(sf::upper_inc_gamma(-0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(sf::upper_inc_gamma(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(sf::upper_inc_gamma(1.0, -1.0), ConfigError);
    CHECK_THROWS_AS(sf::upper_inc_gamma(std::nan(""), 1.0), ConfigError);
    CHECK_THROWS_AS(sf::upper_inc_gamma(1.0, std::numeric_limits<double>::infinity()),
                    ConfigError);
}

TEST_CASE("hypergeometric reference points") {
    CHECK(sf::gauss_2f1_one(1.5, 0.0) == 1.0);
    CHECK(sf::gauss_2f1_one(1.0, -1.0) == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
    // F(1, 3/2; 5/2; -3) = 1 - pi / (3 sqrt(3)) from the arctan antiderivative.
    const double closed = 1.0 - std::numbers::pi / (3.0 * std::sqrt(3.0));
    CHECK(sf::gauss_2f1_one(1.5, -3.0) == doctest::Approx(closed).epsilon(1e-10));
    const double quad =
        1.5 * sf::integrate_adaptive(
                  [](double t) { return std::sqrt(t) / (1.0 + 3.0 * t); }, 0.0, 1.0);
    CHECK(sf::gauss_2f1_one(1.5, -3.0) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("hypergeometric stays in (0, 1] and hits 1 only at x = 0") {
    for (double b : {0.3, 0.5, 1.0, 1.5, 3.0}) {
        CHECK(sf::gauss_2f1_one(b, 0.0) == 1.0);
        for (double x : {-1e-6, -0.1, -1.0, -10.0, -1e4}) {
            const double v = sf::gauss_2f1_one(b, x);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("hypergeometric rejects unsupported arguments") {
    CHECK_THROWS_AS(sf::gauss_2f1_one(0.0, -1.0), ConfigError);
    CHECK_THROWS_AS(sf::gauss_2f1_one(-1.5, -1.0), ConfigError);
    CHECK_THROWS_AS(sf::gauss_2f1_one(1.5, 0.5), ConfigError);
}

TEST_CASE("exponential integral reference points") {
    CHECK(sf::exp_integral_ei(-1.0) == doctest::Approx(-0.21938393439552026).epsilon(1e-12));
    CHECK(sf::exp_integral_ei(-0.1) == doctest::Approx(-1.8229239584193906).epsilon(1e-12));
    CHECK(std::abs(sf::exp_integral_ei(-30.0)) < std::exp(-30.0) / 30.0);
}

TEST_CASE("exponential integral is negative and monotone on x < 0") {
    // Ei'(x) = e^x / x < 0 here, so Ei falls from 0- toward -inf as x -> 0-.
    const std::vector<double> xs = {-30.0, -20.0, -10.0, -5.0, -2.0,
                                    -1.0,  -0.5,  -0.1,  -0.01};
    double prev = sf::exp_integral_ei(xs.front());
    CHECK(prev < 0.0);
    for (size_t i = 1; i < xs.size(); ++i) {
        const double cur = sf::exp_integral_ei(xs[i]);
        CHECK(cur < 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("exponential integral rejects x >= 0") {
    CHECK_THROWS_AS(sf::exp_integral_ei(0.0), ConfigError);
    CHECK_THROWS_AS(sf::exp_integral_ei(1.0), ConfigError);
    CHECK_THROWS_AS(sf::exp_integral_ei(std::nan("")), ConfigError);
}

TEST_CASE("adaptive quadrature basics") {
    const double cube = sf::integrate_adaptive([](double t) { return t * t; }, 0.0, 1.0);
    CHECK(cube == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const double expo = sf::integrate_to_inf([](double t) { return std::exp(-t); }, 0.0);
    CHECK(expo == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quadrature error taxonomy") {
    CHECK_THROWS_AS(sf::integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0),
                    ConfigError);
    gfnoma::specfun::QuadratureSpec bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(sf::integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, bad),
                    ConfigError);

    gfnoma::specfun::QuadratureSpec starved;
    starved.max_subdivisions = 1;
    auto needle = [](double t) {
        return 1.0 / std::sqrt(std::abs(t - 0.5) + 1e-14);
    };
    CHECK_THROWS_AS(sf::integrate_adaptive(needle, 0.0, 1.0, starved),
                    ConvergenceError);
}
