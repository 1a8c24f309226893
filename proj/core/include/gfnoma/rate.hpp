#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gfnoma/network.hpp"
#include "gfnoma/rng.hpp"

namespace gfnoma {

struct RateBreakdown {
    std::vector<std::pair<int, double>> per_user;  // (active index, bits/use)
    double aggregate = 0.0;
    std::vector<int> decode_order;  // active indices, |q| descending
};

// SIC rates for the detected subset of one frame. Indices address entries of
// q_all_active; undetected entries act as interference in every sum. Ties in
// the decode order break toward the lower index.
RateBreakdown sic_rates(const Eigen::VectorXcd& q_all_active,
                        const std::vector<int>& detected,
                        double noise_floor_w);

// Sub-band OFDMA baseline: detected devices sharing a sub-band get rate zero,
// others see missed same-sub-band devices as interference. A sub-band spans
// M/M_SB sub-channels, so its noise floor is (M/M_SB) sigma^2 and rates are
// weighted by 1/M_SB relative to whole-band channel uses.
RateBreakdown ofdma_rates(const Realization& real, const Eigen::VectorXcd& q,
                          const std::vector<int>& detected,
                          const std::vector<int>& assignment,
                          const NetworkConfig& cfg);

struct CollisionOutcome {
    std::vector<int> choices;    // pool index per active device
    std::vector<char> collided;  // shared choice with some other device
};

CollisionOutcome op_preamble_collision(int k, int pool_size, RngStream& rng);

}  // namespace gfnoma
