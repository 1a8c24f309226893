#pragma once

#include <vector>

#include "gfnoma/rng.hpp"

namespace gfnoma {

// System parameters for one grant-free uplink cell. Powers are linear watts,
// distances are meters. Defaults reproduce the reference urban macro setup.
struct NetworkConfig {
    int n_devices = 240;
    int preamble_len = 120;   // symbols spent on the preamble per frame
    int data_symbols = 10;    // payload symbols per frame
    double d0_m = 10.0;
    double d1_m = 150.0;
    double alpha = 4.0;
    double noise_w = 1e-14;   // receiver noise power (-110 dBm)
    double tx_power_w = 0.1;  // per-device transmit power (20 dBm)
    double p_act = 0.1;       // per-frame activation probability
    double c1 = 2.0;          // detector calibration knobs
    double c2 = 1.0;
    double c3 = 1.0;
    double p_static_w = 3e-3;
    double p_dynamic_w = 0.1;
    double antenna_eff = 0.5;
    int m_subbands = 6;       // OFDMA comparison baseline only
    double eps_tail = 1e-6;   // rate integral tail split threshold

    // Throws ConfigError when any parameter is outside its admissible range.
    void validate() const;

    double intensity() const { return n_devices * p_act; }
};

// One sampled frame: which devices woke up and their link states.
struct Realization {
    int k_active = 0;
    std::vector<int> ids;     // distinct device indices, unordered
    std::vector<double> r_m;  // distance of each active device
    std::vector<double> xi;   // unit-mean fading power of each active device
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

double distance_pdf(const NetworkConfig& cfg, double r);
double distance_cdf(const NetworkConfig& cfg, double r);

// Draws K ~ Poisson(N * p_act) conditioned on K <= N, then distances from the
// annulus density and independent Exp(1) fading marks.
Realization sample_realization(const NetworkConfig& cfg, RngStream& rng);

// Received power P * xi * r^-alpha of one active device.
double received_power(const NetworkConfig& cfg, double r, double xi);

}  // namespace gfnoma
