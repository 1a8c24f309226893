#pragma once

#include <string>
#include <vector>

#include "gfnoma/network.hpp"

namespace gfnoma {

struct CalibrationAnchor {
    NetworkConfig config;
    double target_p_per = 0.9;
};

struct CalibrationResult {
    double c1 = 2.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double residual = 0.0;          // max |achieved - target| over anchors
    std::vector<double> achieved;   // p_per per anchor at the fitted constants
};

struct CalibrationOptions {
    double c2_lo = 0.6;
    double c2_hi = 8.0;
    double c2_step = 0.01;
    double c2_refine_step = 0.001;
    double c3_lo = 1e-3;
    double c3_hi = 2000.0;
    double c3_tol = 1e-10;
    double warn_residual = 0.02;
};

// Fits (c2, c3) against target perfect-detection probabilities with c1 held
// at 2. With one anchor c2 is kept from its config and c3 is bisected to an
// exact match. With several, c3 is solved against the first anchor for each
// c2 candidate on a grid and the remaining anchors are scored by squared
// error; the best candidate is kept after a local refinement pass. Residuals
// above warn_residual are reported on stderr.
CalibrationResult calibrate_constants(const std::vector<CalibrationAnchor>& anchors,
                                      const CalibrationOptions& opts = {});

// Anchors file: optional "base = <config path>" line (relative paths resolve
// against the anchors file directory), then one anchor per line as
// whitespace-separated key=value overrides plus a mandatory target=<p_per>.
std::vector<CalibrationAnchor> load_anchors(const std::string& path);

}  // namespace gfnoma
