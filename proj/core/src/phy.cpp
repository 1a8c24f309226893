#include "gfnoma/phy.hpp"

#include <cmath>
#include <numbers>

#include "gfnoma/errors.hpp"

namespace gfnoma {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

int largest_prime_leq(int n) {
    for (int p = n; p >= 2; --p)
        if (is_prime(p)) return p;
    throw ConfigError("no prime <= " + std::to_string(n));
}

PreambleMatrix gen_gaussian_preambles(int m, int n, RngStream& rng) {
    if (m < 1 || n < 1) throw ConfigError("preamble matrix dims must be >= 1");
    PreambleMatrix out;
    out.kind = PreambleKind::gaussian;
    out.cols.resize(m, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) out.cols(i, j) = rng.cnormal();
        out.cols.col(j) /= out.cols.col(j).norm();
    }
    return out;
}

PreambleMatrix gen_zadoff_chu(int m, int n_seq) {
    if (!is_prime(m)) throw ConfigError("Zadoff-Chu length must be prime");
    if (n_seq < 1 || n_seq > m) throw ConfigError("n_seq must lie in [1, m]");
    Eigen::VectorXcd root(m);
    for (int i = 0; i < m; ++i) {
        const double phase =
            -std::numbers::pi * static_cast<double>(i) * (i + 1) / m;
        root(i) = std::polar(1.0 / std::sqrt(static_cast<double>(m)), phase);
    }
    PreambleMatrix out;
    out.kind = PreambleKind::zadoff_chu;
    out.cols.resize(m, n_seq);
    for (int j = 0; j < n_seq; ++j)
        for (int i = 0; i < m; ++i) out.cols(i, j) = root((i + j) % m);
    return out;
}

PreambleRx synth_preamble_rx(const Realization& real, const PreambleMatrix& phi,
                             const NetworkConfig& cfg, RngStream& rng) {
    const int m = static_cast<int>(phi.cols.rows());
    PreambleRx out;
    out.q.resize(real.k_active);
    out.y0 = Eigen::VectorXcd::Zero(m);
    for (int i = 0; i < real.k_active; ++i) {
        const double amp = std::sqrt(received_power(cfg, real.r_m[i], real.xi[i]));
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        out.q(i) = std::polar(amp, theta);
        out.y0 += out.q(i) * phi.cols.col(real.ids[i]);
    }
    const double sd = std::sqrt(cfg.noise_w);
    for (int i = 0; i < m; ++i) out.y0(i) += sd * rng.cnormal();
    return out;
}

Eigen::MatrixXcd gen_qpsk_symbols(int k, int l, RngStream& rng) {
    const double u = std::numbers::sqrt2 / 2.0;
    Eigen::MatrixXcd s(k, l);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < l; ++j) {
            const double re = rng.uniform() < 0.5 ? -u : u;
            const double im = rng.uniform() < 0.5 ? -u : u;
            s(i, j) = {re, im};
        }
    return s;
}

Eigen::MatrixXcd synth_data_rx(const Realization& real, const PreambleMatrix& phi,
                               const Eigen::VectorXcd& q,
                               const Eigen::MatrixXcd& symbols,
                               const NetworkConfig& cfg, RngStream& rng) {
    const int m = static_cast<int>(phi.cols.rows());
    const int l = static_cast<int>(symbols.cols());
    if (symbols.rows() != real.k_active || q.size() != real.k_active)
        throw ConfigError("data synthesis dims inconsistent with realization");
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(m, l);
    for (int j = 0; j < l; ++j)
        for (int i = 0; i < real.k_active; ++i)
            y.col(j) += q(i) * symbols(i, j) * phi.cols.col(real.ids[i]);
    const double sd = std::sqrt(cfg.noise_w);
    for (int j = 0; j < l; ++j)
        for (int i = 0; i < m; ++i) y(i, j) += sd * rng.cnormal();
    return y;
}

}  // namespace gfnoma
