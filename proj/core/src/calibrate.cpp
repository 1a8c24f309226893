#include "gfnoma/calibrate.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "gfnoma/analysis.hpp"
#include "gfnoma/config_io.hpp"
#include "gfnoma/errors.hpp"

namespace gfnoma {

namespace {

double pper_with(const NetworkConfig& base, double c2, double c3) {
    NetworkConfig cfg = base;
    cfg.c1 = 2.0;
    cfg.c2 = c2;
    cfg.c3 = c3;
    return p_per(cfg);
}

// Solves p_per(c3) = target for one anchor. p_per decreases in c3, so a
// plain bisection suffices; no root in the bracket yields nullopt.
std::optional<double> solve_c3(const CalibrationAnchor& a, double c2,
                               const CalibrationOptions& opts) {
    double lo = opts.c3_lo;
    double hi = opts.c3_hi;
    double flo = pper_with(a.config, c2, lo) - a.target_p_per;
    double fhi = pper_with(a.config, c2, hi) - a.target_p_per;
    if (flo < 0.0 || fhi > 0.0) return std::nullopt;
    while (hi - lo > opts.c3_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = pper_with(a.config, c2, mid) - a.target_p_per;
        if (fm >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct Candidate {
    double c2 = 0.0;
    double c3 = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

Candidate score_c2(const std::vector<CalibrationAnchor>& anchors, double c2,
                   const CalibrationOptions& opts) {
    Candidate cand;
    cand.c2 = c2;
    const auto c3 = solve_c3(anchors.front(), c2, opts);
    if (!c3) return cand;
    cand.c3 = *c3;
    double sse = 0.0;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        const double p = pper_with(anchors[i].config, c2, cand.c3);
        const double e = p - anchors[i].target_p_per;
        sse += e * e;
    }
    cand.sse = sse;
    return cand;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

CalibrationResult calibrate_constants(const std::vector<CalibrationAnchor>& anchors,
                                      const CalibrationOptions& opts) {
    if (anchors.empty()) throw ConfigError("calibration needs at least one anchor");
    for (const auto& a : anchors)
        if (!(a.target_p_per > 0.0 && a.target_p_per < 1.0))
            throw ConfigError("anchor target p_per must lie in (0, 1)");

    CalibrationResult res;
    res.c1 = 2.0;

    if (anchors.size() == 1) {
        res.c2 = anchors.front().config.c2;
        const auto c3 = solve_c3(anchors.front(), res.c2, opts);
        if (!c3)
            throw ConvergenceError("anchor target unreachable for any threshold scale");
        res.c3 = *c3;
    } else {
        Candidate best;
        for (int i = 0;; ++i) {
            const double c2 = opts.c2_lo + i * opts.c2_step;
            if (c2 >= opts.c2_hi) break;
            const Candidate cand = score_c2(anchors, c2, opts);
            if (cand.sse < best.sse) best = cand;
        }
        if (!std::isfinite(best.sse))
            throw ConvergenceError("no (c2, c3) candidate reaches the first anchor");
        const int steps =
            static_cast<int>(std::round(opts.c2_step / opts.c2_refine_step));
        for (int i = -steps; i <= steps; ++i) {
            const double c2 = best.c2 + i * opts.c2_refine_step;
            if (c2 <= 0.0) continue;
            const Candidate cand = score_c2(anchors, c2, opts);
            if (cand.sse < best.sse) best = cand;
        }
        res.c2 = best.c2;
        res.c3 = best.c3;
    }

    res.residual = 0.0;
    for (const auto& a : anchors) {
        const double p = pper_with(a.config, res.c2, res.c3);
        res.achieved.push_back(p);
        res.residual = std::max(res.residual, std::abs(p - a.target_p_per));
    }
    if (res.residual > opts.warn_residual) {
        std::cerr << "WARNING: calibration residual " << res.residual
                  << " exceeds " << opts.warn_residual
                  << "; anchors are not jointly reachable\n";
    }
    return res;
}

std::vector<CalibrationAnchor> load_anchors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open anchors file " + path);

    NetworkConfig base;
    bool have_base = false;
    std::vector<std::string> anchor_lines;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos && trim(line.substr(0, eq)) == "base") {
            std::filesystem::path p = trim(line.substr(eq + 1));
            if (p.empty())
                throw ConfigError(path + ": empty base path on line " +
                                  std::to_string(line_no));
            if (p.is_relative())
                p = std::filesystem::path(path).parent_path() / p;
            base = load_config(p.string());
            have_base = true;
        } else {
            anchor_lines.push_back(line);
        }
    }
    if (anchor_lines.empty())
        throw ConfigError(path + ": no anchor lines found");
    if (!have_base) base.validate();

    std::vector<CalibrationAnchor> anchors;
    for (const auto& text : anchor_lines) {
        CalibrationAnchor a;
        a.config = base;
        bool have_target = false;
        std::istringstream toks(text);
        std::string tok;
        while (toks >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw ConfigError(path + ": anchor token '" + tok +
                                  "' is not key=value");
            const std::string key = tok.substr(0, eq);
            const std::string value = tok.substr(eq + 1);
            if (key == "target") {
                try {
                    a.target_p_per = std::stod(value);
                } catch (const std::exception&) {
                    throw ConfigError(path + ": bad target '" + value + "'");
                }
                have_target = true;
            } else {
                apply_config_entry(a.config, key, value);
            }
        }
        if (!have_target)
            throw ConfigError(path + ": anchor line lacks target=: '" + text + "'");
        a.config.validate();
        anchors.push_back(std::move(a));
    }
    return anchors;
}

}  // namespace gfnoma
