#include "gfnoma/rng.hpp"

#include <cmath>
#include <numbers>

#include "gfnoma/errors.hpp"

namespace gfnoma {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : eng_(seed) {}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t point_index,
                     std::uint64_t trial_index) {
    std::uint64_t state = master_seed;
    (void)splitmix64(state);
    state ^= splitmix64(state) + point_index;
    state ^= splitmix64(state) + trial_index;
    eng_.seed(splitmix64(state));
}

double RngStream::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
}

std::complex<double> RngStream::cnormal() {
    const double s = std::numbers::sqrt2 / 2.0;
    return {normal() * s, normal() * s};
}

double RngStream::exponential() {
    return -std::log1p(-uniform());
}

std::uint64_t RngStream::poisson(double lambda) {
    if (!(lambda >= 0.0)) throw ConfigError("poisson: lambda must be >= 0");
    std::uint64_t total = 0;
    // chunked so exp(-lambda) stays representable
    while (lambda > 0.0) {
        const double chunk = std::min(lambda, 500.0);
        const double limit = std::exp(-chunk);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        total += k;
        lambda -= chunk;
    }
    return total;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
    if (n == 0) throw ConfigError("uniform_int: empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = eng_();
    } while (v >= limit);
    return v % n;
}

}  // namespace gfnoma
