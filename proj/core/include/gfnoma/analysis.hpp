#pragma once

#include <utility>
#include <vector>

#include "gfnoma/network.hpp"

namespace gfnoma {

// Probability that one active device's received amplitude clears the
// detection threshold.
double p0(const NetworkConfig& cfg);

// Perfect-detection probability: Poisson-weighted P0^k truncated at k_max.
double p_per(const NetworkConfig& cfg);

// Same closed form with a real-valued device count (density-derived cells).
// n <= 1 is treated as an empty network with p_per = 1.
double p_per_n(const NetworkConfig& cfg, double n);

// Expected total received power of the missed (sub-threshold) devices.
double missed_power_mean(const NetworkConfig& cfg);

// Per-device channel-estimation MSE given j detected devices; valid for
// 1 <= j <= M-4.
double mse_j(const NetworkConfig& cfg, int j);

// Mean received power of a detected device.
double xi_mean(const NetworkConfig& cfg);

// Pr{J=j} detected devices under binomial thinning of the truncated Poisson.
double pr_j(const NetworkConfig& cfg, int j);

// Average channel-estimation NMSE: (1/Xi) sum_j MSE_j Pr{J=j}.
double avg_nmse(const NetworkConfig& cfg);

// Laplace transform of the single-device SNR, evaluated through the
// hypergeometric form; strictly decreasing from 1 to 0 on s > 0.
double q_of_s(const NetworkConfig& cfg, double s);

// Splitting point s0 with q_of_s(s0) = cfg.eps_tail.
double rate_tail_split(const NetworkConfig& cfg);

// Lower bound on the mean aggregate data rate in bits per channel use.
double avg_rate(const NetworkConfig& cfg);

// Long-term mean device power (1-P_ACT) P_S + P_ACT (2 P_D + P/eps).
double avg_power_dev(const NetworkConfig& cfg);

// Stable accesses per watt: lambda P_PER / (N Pdev).
double ee(const NetworkConfig& cfg);

// Expected stable accesses at device density lambda0 (per m^2); the device
// count is lambda0 pi (D1^2 - D0^2).
double apce(const NetworkConfig& cfg, double lambda0_per_m2);

struct AnalyticalReport {
    double p0 = 0.0;
    double p_per = 0.0;
    int k_max = 0;
    double amp_threshold = 0.0;
    std::vector<std::pair<int, double>> mse_by_j;
    double avg_nmse = 0.0;
    double xi_mean = 0.0;
    double avg_rate = 0.0;
    double p_dev_bar = 0.0;
    double ee = 0.0;
    double apce = 0.0;
};

// lambda0_per_m2 <= 0 derives the density from the configured device count.
AnalyticalReport analyze(const NetworkConfig& cfg, double lambda0_per_m2 = 0.0);

}  // namespace gfnoma
