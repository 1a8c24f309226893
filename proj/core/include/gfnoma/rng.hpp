#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace gfnoma {

// Deterministic per-trial random stream. Distribution sampling is done by
// hand on top of mt19937_64 so that results are identical across standard
// library implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);
    RngStream(std::uint64_t master_seed, std::uint64_t point_index,
              std::uint64_t trial_index);

    double uniform();                       // [0, 1)
    double normal();                        // N(0, 1)
    std::complex<double> cnormal();         // circular CN(0, 1)
    double exponential();                   // Exp(1)
    std::uint64_t poisson(double lambda);
    std::uint64_t uniform_int(std::uint64_t n);  // [0, n)

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gfnoma
