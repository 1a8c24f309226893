#include "gfnoma/rate.hpp"

#include <algorithm>
#include <cmath>

#include "gfnoma/errors.hpp"

namespace gfnoma {

RateBreakdown sic_rates(const Eigen::VectorXcd& q_all_active,
                        const std::vector<int>& detected,
                        double noise_floor_w) {
    RateBreakdown out;
    out.decode_order = detected;
    std::sort(out.decode_order.begin(), out.decode_order.end(),
              [&q_all_active](int a, int b) {
                  const double ma = std::norm(q_all_active(a));
                  const double mb = std::norm(q_all_active(b));
                  return ma != mb ? ma > mb : a < b;
              });

    std::vector<char> is_detected(q_all_active.size(), 0);
    for (int d : detected) is_detected[d] = 1;
    double missed_power = 0.0;
    for (int i = 0; i < q_all_active.size(); ++i)
        if (!is_detected[i]) missed_power += std::norm(q_all_active(i));

    const int j_count = static_cast<int>(out.decode_order.size());
    std::vector<double> suffix(j_count + 1, 0.0);
    for (int j = j_count - 1; j >= 0; --j)
        suffix[j] = suffix[j + 1] + std::norm(q_all_active(out.decode_order[j]));

    out.per_user.reserve(j_count);
    for (int j = 0; j < j_count; ++j) {
        const int idx = out.decode_order[j];
        const double interference = suffix[j + 1] + missed_power + noise_floor_w;
        const double r = std::log2(1.0 + std::norm(q_all_active(idx)) / interference);
        out.per_user.emplace_back(idx, r);
        out.aggregate += r;
    }
    return out;
}

RateBreakdown ofdma_rates(const Realization& real, const Eigen::VectorXcd& q,
                          const std::vector<int>& detected,
                          const std::vector<int>& assignment,
                          const NetworkConfig& cfg) {
    if (q.size() != real.k_active)
        throw ConfigError("ofdma_rates dims inconsistent with realization");
    const int msb = cfg.m_subbands;
    const double band_noise =
        static_cast<double>(cfg.preamble_len) * cfg.noise_w / msb;

    std::vector<char> is_detected(real.k_active, 0);
    for (int d : detected) is_detected[d] = 1;

    std::vector<int> detected_per_band(msb, 0);
    for (int d : detected) ++detected_per_band[assignment[real.ids[d]]];
    std::vector<double> missed_power(msb, 0.0);
    for (int i = 0; i < real.k_active; ++i)
        if (!is_detected[i]) missed_power[assignment[real.ids[i]]] += std::norm(q(i));

    RateBreakdown out;
    out.decode_order = detected;
    out.per_user.reserve(detected.size());
    for (int d : detected) {
        const int band = assignment[real.ids[d]];
        double r = 0.0;
        if (detected_per_band[band] == 1) {
            const double sinr = std::norm(q(d)) / (missed_power[band] + band_noise);
            r = std::log2(1.0 + sinr) / msb;
        }
        out.per_user.emplace_back(d, r);
        out.aggregate += r;
    }
    return out;
}

CollisionOutcome op_preamble_collision(int k, int pool_size, RngStream& rng) {
    if (pool_size < 1) throw ConfigError("preamble pool must be nonempty");
    CollisionOutcome out;
    out.choices.resize(k);
    out.collided.assign(k, 0);
    std::vector<int> count(pool_size, 0);
    for (int i = 0; i < k; ++i) {
        out.choices[i] = rng.uniform_int(pool_size);
        ++count[out.choices[i]];
    }
    for (int i = 0; i < k; ++i)
        if (count[out.choices[i]] > 1) out.collided[i] = 1;
    return out;
}

}  // namespace gfnoma
