#include "gfnoma/aud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gfnoma/errors.hpp"

namespace gfnoma {

namespace {

constexpr double kDeltaStop = 0.1;
constexpr int kSpInnerCap = 30;

Eigen::VectorXcd gather_solve(const AudWorkspace& ws,
                              const std::vector<int>& t) {
    const int k = static_cast<int>(t.size());
    Eigen::MatrixXcd g(k, k);
    Eigen::VectorXcd b(k);
    for (int a = 0; a < k; ++a) {
        b(a) = ws.corr0(t[a]);
        for (int c = 0; c < k; ++c) g(a, c) = ws.gram(t[a], t[c]);
    }
    return g.ldlt().solve(b);
}

double residual_energy(const AudWorkspace& ws, const std::vector<int>& t,
                       const Eigen::VectorXcd& q) {
    std::complex<double> acc = 0.0;
    for (size_t a = 0; a < t.size(); ++a) acc += std::conj(ws.corr0(t[a])) * q(a);
    return std::max(0.0, ws.y_energy - acc.real());
}

Eigen::VectorXcd residual_corr(const AudWorkspace& ws, const std::vector<int>& t,
                               const Eigen::VectorXcd& q) {
    Eigen::VectorXcd rc = ws.corr0;
    for (size_t a = 0; a < t.size(); ++a) rc -= q(a) * ws.gram.col(t[a]);
    return rc;
}

std::vector<int> top_k_abs(const Eigen::VectorXcd& v, int k) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto by_mag = [&v](int a, int b) {
        const double ma = std::norm(v(a)), mb = std::norm(v(b));
        return ma != mb ? ma > mb : a < b;
    };
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), by_mag);
    idx.resize(k);
    return idx;
}

Detection prune_and_sort(const std::vector<int>& supp,
                         const Eigen::VectorXcd& coeffs, double upsilon,
                         bool strict) {
    std::vector<std::pair<int, std::complex<double>>> kept;
    for (size_t i = 0; i < supp.size(); ++i) {
        const double mag = std::abs(coeffs(i));
        if (strict ? mag > upsilon : mag >= upsilon)
            kept.emplace_back(supp[i], coeffs(i));
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Detection out;
    out.support.reserve(kept.size());
    out.coeffs.resize(static_cast<int>(kept.size()));
    for (size_t i = 0; i < kept.size(); ++i) {
        out.support.push_back(kept[i].first);
        out.coeffs(static_cast<int>(i)) = kept[i].second;
    }
    return out;
}

}  // namespace

int k_max(const NetworkConfig& cfg) {
    const double v = k_max_n(cfg, cfg.n_devices);
    if (v <= 0.0) {
        std::fprintf(stderr,
                     "warning: c2 <= 1/c1 leaves no recoverable sparsity\n");
        return 0;
    }
    return static_cast<int>(v);
}

double amp_threshold(const NetworkConfig& cfg) {
    return amp_threshold_n(cfg, cfg.n_devices);
}

double k_max_n(const NetworkConfig& cfg, double n) {
    const double ln_n = std::log(n);
    if (ln_n <= 0.0) throw ConfigError("k_max needs more than one device");
    return std::floor(cfg.preamble_len / (2.0 * ln_n) * (cfg.c2 - 1.0 / cfg.c1));
}

double amp_threshold_n(const NetworkConfig& cfg, double n) {
    const double ln_n = std::log(n);
    if (ln_n <= 0.0) throw ConfigError("amp_threshold needs more than one device");
    return cfg.c3 *
           std::sqrt(2.0 * cfg.c1 * cfg.noise_w * ln_n / cfg.preamble_len);
}

AudWorkspace make_aud_workspace(const Eigen::MatrixXcd& phi,
                                const Eigen::VectorXcd& y0) {
    AudWorkspace ws;
    ws.gram = phi.adjoint() * phi;
    ws.corr0 = phi.adjoint() * y0;
    ws.y_energy = y0.squaredNorm();
    ws.m_rows = static_cast<int>(phi.rows());
    return ws;
}

Detection ta_omp(const AudWorkspace& ws, double upsilon, double noise_w) {
    const int n = static_cast<int>(ws.gram.cols());
    const double bound = ws.m_rows * noise_w * (1.0 + kDeltaStop);
    std::vector<int> supp;
    std::vector<char> used(n, 0);
    Eigen::VectorXcd qh;
    Eigen::VectorXcd rc = ws.corr0;
    double energy = ws.y_energy;

    while (static_cast<int>(supp.size()) < std::min(ws.m_rows, n)) {
        if (energy <= bound) break;
        int j = -1;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (used[i]) continue;
            const double mag = std::norm(rc(i));
            if (mag > best) {
                best = mag;
                j = i;
            }
        }
        std::vector<int> cand = supp;
        cand.push_back(j);
        const Eigen::VectorXcd qc = gather_solve(ws, cand);
        if (std::abs(qc(qc.size() - 1)) < upsilon) break;
        supp = std::move(cand);
        used[j] = 1;
        qh = qc;
        rc = residual_corr(ws, supp, qh);
        energy = residual_energy(ws, supp, qh);
    }
    return prune_and_sort(supp, qh, upsilon, false);
}

Detection ta_omp(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                 double upsilon, double noise_w) {
    return ta_omp(make_aud_workspace(phi, y0), upsilon, noise_w);
}

Detection ta_sp(const AudWorkspace& ws, double upsilon, int k_cap,
                double noise_w) {
    const int n = static_cast<int>(ws.gram.cols());
    const double bound = ws.m_rows * noise_w * (1.0 + kDeltaStop);
    Detection empty;
    if (ws.y_energy <= bound) return empty;

    const int top = std::min({k_cap, ws.m_rows / 2, n});
    for (int k = 1; k <= top; ++k) {
        std::vector<int> t = top_k_abs(ws.corr0, k);
        std::sort(t.begin(), t.end());
        for (int it = 0; it < kSpInnerCap; ++it) {
            const Eigen::VectorXcd qt = gather_solve(ws, t);
            const Eigen::VectorXcd rc = residual_corr(ws, t, qt);
            std::vector<int> uni = top_k_abs(rc, k);
            uni.insert(uni.end(), t.begin(), t.end());
            std::sort(uni.begin(), uni.end());
            uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
            const Eigen::VectorXcd qu = gather_solve(ws, uni);
            std::vector<int> order = top_k_abs(qu, std::min<int>(k, qu.size()));
            std::vector<int> t2;
            t2.reserve(order.size());
            for (int o : order) t2.push_back(uni[o]);
            std::sort(t2.begin(), t2.end());
            const bool stable = t2 == t;
            t = std::move(t2);
            if (stable) break;
        }
        const Eigen::VectorXcd q = gather_solve(ws, t);
        if (residual_energy(ws, t, q) > bound) continue;
        bool all_clear = true;
        for (int i = 0; i < q.size(); ++i)
            if (std::abs(q(i)) < upsilon) {
                all_clear = false;
                break;
            }
        if (all_clear) return prune_and_sort(t, q, upsilon, false);
    }
    return empty;
}

Detection ta_sp(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                double upsilon, int k_cap, double noise_w) {
    return ta_sp(make_aud_workspace(phi, y0), upsilon, k_cap, noise_w);
}

Detection lasso_ista(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                     double gamma_reg, int max_iter, double tol,
                     double upsilon) {
    const int n = static_cast<int>(phi.cols());
    const double m = static_cast<double>(phi.rows());
    const Eigen::MatrixXcd gram = phi.adjoint() * phi;
    const Eigen::VectorXcd b = phi.adjoint() * y0;

    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
    double lam = 1.0;
    for (int it = 0; it < 60; ++it) {
        v = gram * v;
        lam = v.norm();
        if (lam == 0.0) throw ConfigError("zero preamble matrix");
        v /= lam;
    }
    const double step = m / (1.01 * lam);
    const double radius = gamma_reg * step;

    Eigen::VectorXcd q = Eigen::VectorXcd::Zero(n);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXcd z = q - (step / m) * (gram * q - b);
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::abs(z(i));
            const std::complex<double> next =
                mag <= radius ? std::complex<double>(0.0)
                              : z(i) * (1.0 - radius / mag);
            delta = std::max(delta, std::abs(next - q(i)));
            q(i) = next;
        }
        if (delta < tol) {
            converged = true;
            break;
        }
    }
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    Detection out = prune_and_sort(all, q, upsilon, true);
    out.converged = converged;
    return out;
}

Eigen::VectorXcd ls_estimate(const Eigen::VectorXcd& y0,
                             const Eigen::MatrixXcd& phi,
                             const std::vector<int>& support) {
    const int k = static_cast<int>(support.size());
    if (k > phi.rows()) throw ConfigError("LS support larger than M");
    Eigen::MatrixXcd a(phi.rows(), k);
    for (int i = 0; i < k; ++i) a.col(i) = phi.col(support[i]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    // Eigen's default rank cutoff sits below the rounding noise left in R by
    // exactly collinear columns; pivots this far under the leading one can
    // only come from a degenerate support.
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
        throw ConvergenceError("rank-deficient support in LS estimation");
    return qr.solve(y0);
}

EventClass classify_event(const std::vector<int>& truth,
                          const std::vector<int>& detected) {
    std::vector<int> t = truth, d = detected;
    std::sort(t.begin(), t.end());
    std::sort(d.begin(), d.end());
    if (t == d) return EventClass::event1;
    if (std::includes(t.begin(), t.end(), d.begin(), d.end()))
        return EventClass::event2;
    return EventClass::event3;
}

double empirical_nmse(const Eigen::VectorXcd& q_true,
                      const Eigen::VectorXcd& q_hat) {
    if (q_true.size() == 0 || q_true.size() != q_hat.size())
        throw ConfigError("empirical_nmse needs matching nonempty vectors");
    const double ref = q_true.squaredNorm();
    if (ref == 0.0) throw ConfigError("empirical_nmse reference is zero");
    return (q_true - q_hat).squaredNorm() /
           (ref * static_cast<double>(q_true.size()));
}

}  // namespace gfnoma
