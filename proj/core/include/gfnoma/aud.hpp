#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gfnoma/network.hpp"

namespace gfnoma {

enum class EventClass { event1, event2, event3 };

struct Detection {
    std::vector<int> support;  // device indices, ascending
    Eigen::VectorXcd coeffs;   // aligned with support
    bool converged = true;
};

// Maximum recoverable sparsity floor(M/(2 ln N) * (c2 - 1/c1)), clamped at 0.
int k_max(const NetworkConfig& cfg);

// Minimum detectable amplitude c3 * sqrt(2 c1 sigma^2 ln N / M).
double amp_threshold(const NetworkConfig& cfg);

// Real-valued device-count variants used by the analytical evaluators when N
// is derived from a density. Callers must guarantee n > 1.
double k_max_n(const NetworkConfig& cfg, double n);
double amp_threshold_n(const NetworkConfig& cfg, double n);

// Correlation products shared by the greedy detectors; computing them once per
// frame lets TA-OMP and TA-SP run on the same frame without redundant work.
struct AudWorkspace {
    Eigen::MatrixXcd gram;   // Phi^H Phi
    Eigen::VectorXcd corr0;  // Phi^H y0
    double y_energy = 0.0;
    int m_rows = 0;
};

AudWorkspace make_aud_workspace(const Eigen::MatrixXcd& phi,
                                const Eigen::VectorXcd& y0);

// Greedy OMP with threshold-controlled stopping: iterate while the residual
// energy exceeds M sigma^2 (1 + delta) and the newest LS coefficient clears
// upsilon; coefficients below upsilon are pruned from the final support.
Detection ta_omp(const AudWorkspace& ws, double upsilon, double noise_w);
Detection ta_omp(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                 double upsilon, double noise_w);

// Subspace pursuit over trial sparsity levels 1..k_cap, accepting the first
// level whose retained coefficients all clear upsilon and whose residual
// energy meets the noise bound.
Detection ta_sp(const AudWorkspace& ws, double upsilon, int k_cap,
                double noise_w);
Detection ta_sp(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                double upsilon, int k_cap, double noise_w);

// Proximal-gradient solver for (1/2M)||y0 - Phi q||^2 + gamma ||q||_1 with
// complex soft thresholding. Support is {n : |q_n| > upsilon}.
Detection lasso_ista(const Eigen::VectorXcd& y0, const Eigen::MatrixXcd& phi,
                     double gamma_reg, int max_iter, double tol,
                     double upsilon);

Eigen::VectorXcd ls_estimate(const Eigen::VectorXcd& y0,
                             const Eigen::MatrixXcd& phi,
                             const std::vector<int>& support);

EventClass classify_event(const std::vector<int>& truth,
                          const std::vector<int>& detected);

// ||q - q_hat||^2 / (||q||^2 J) for the J detected devices.
double empirical_nmse(const Eigen::VectorXcd& q_true,
                      const Eigen::VectorXcd& q_hat);

}  // namespace gfnoma
