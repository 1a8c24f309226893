#pragma once

#include <functional>

#include "gfnoma/network.hpp"

namespace gfnoma {

struct OptResult {
    double arg_opt = 0.0;    // dBm or meters
    double value_opt = 0.0;  // accesses/W or accesses
    double constrained_arg = 0.0;
    double constrained_value = 0.0;
    double p_per_at_opt = 0.0;
    bool has_constraint = false;
};

// Golden-section maximization of a function assumed unimodal on [lo, hi];
// returns the interior maximizer once the bracket shrinks below x_tol.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double x_tol);

// Boundary crossing of a monotone f against a target level: the smallest x
// with f(x) >= target when f increases, the largest such x when it decreases.
// The returned point always satisfies the target.
double min_arg_meeting(const std::function<double(double)>& f, double target,
                       double lo, double hi, double x_tol, bool increasing);

// Transmit power maximizing EE, searched in dBm on [0, 30]. A positive
// min_pper adds the reliability-constrained solution (lowest P meeting it).
OptResult optimize_ee(const NetworkConfig& cfg, double min_pper = 0.0);

// Cell radius maximizing APCE at fixed device density, searched on
// [D0+1, 600] m. A positive min_pper adds the constrained solution (largest
// D1 meeting it).
OptResult optimize_apce(const NetworkConfig& cfg, double lambda0_per_m2,
                        double min_pper = 0.0);

}  // namespace gfnoma
