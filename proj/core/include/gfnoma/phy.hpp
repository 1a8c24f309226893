#pragma once

#include <Eigen/Dense>

#include "gfnoma/network.hpp"
#include "gfnoma/rng.hpp"

namespace gfnoma {

enum class PreambleKind { gaussian, zadoff_chu };

struct PreambleMatrix {
    Eigen::MatrixXcd cols;  // one unit-norm column per device
    PreambleKind kind = PreambleKind::gaussian;
};

PreambleMatrix gen_gaussian_preambles(int m, int n, RngStream& rng);

// n_seq cyclic shifts of a root-1 Zadoff-Chu sequence; m must be prime so the
// shifts are exactly orthogonal.
PreambleMatrix gen_zadoff_chu(int m, int n_seq);

int largest_prime_leq(int n);

struct PreambleRx {
    Eigen::VectorXcd y0;  // length M
    Eigen::VectorXcd q;   // ground-truth coefficients, one per active device
};

// y0 = Phi q + w with q_i = sqrt(P xi_i) r_i^{-alpha/2} e^{j theta_i}.
PreambleRx synth_preamble_rx(const Realization& real, const PreambleMatrix& phi,
                             const NetworkConfig& cfg, RngStream& rng);

// k x l unit-average-power QPSK symbols.
Eigen::MatrixXcd gen_qpsk_symbols(int k, int l, RngStream& rng);

// Column l is sum_i q_i s_{i,l} phi_{ids[i]} + w_l.
Eigen::MatrixXcd synth_data_rx(const Realization& real, const PreambleMatrix& phi,
                               const Eigen::VectorXcd& q,
                               const Eigen::MatrixXcd& symbols,
                               const NetworkConfig& cfg, RngStream& rng);

}  // namespace gfnoma
