#include "gfnoma/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gfnoma/aud.hpp"
#include "gfnoma/config_io.hpp"
#include "gfnoma/errors.hpp"
#include "gfnoma/phy.hpp"
#include "gfnoma/rate.hpp"

namespace gfnoma {

namespace {

class RunningStat {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / n_;
        m2_ += d * (x - mean_);
    }
    int count() const { return static_cast<int>(n_); }
    EmpiricalStat summary() const {
        EmpiricalStat s;
        s.n = count();
        if (n_ == 0) return s;
        s.mean = mean_;
        double half = 0.0;
        if (n_ > 1) {
            const double var = m2_ / static_cast<double>(n_ - 1);
            half = 1.959963984540054 * std::sqrt(var / static_cast<double>(n_));
        }
        s.ci_lo = s.mean - half;
        s.ci_hi = s.mean + half;
        return s;
    }

  private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

EmpiricalStat scaled(const EmpiricalStat& s, double factor) {
    EmpiricalStat out = s;
    out.mean *= factor;
    out.ci_lo *= factor;
    out.ci_hi *= factor;
    if (factor < 0.0) std::swap(out.ci_lo, out.ci_hi);
    return out;
}

std::string fmt_num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string utc_now() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct DetectorAccum {
    DetectorKind kind = DetectorKind::ta_omp;
    RunningStat p_per;
    RunningStat nmse;
    RunningStat rate_noma;
    RunningStat rate_oma;
    int failures = 0;
};

bool is_matrix_detector(DetectorKind k) {
    return k == DetectorKind::ta_omp || k == DetectorKind::ta_sp ||
           k == DetectorKind::lasso;
}

Detection detect_zc_baseline(const Realization& real,
                             const Eigen::VectorXcd& corr,
                             const CollisionOutcome& coll, double upsilon) {
    std::vector<std::pair<int, std::complex<double>>> hits;
    for (int i = 0; i < real.k_active; ++i)
        if (!coll.collided[i] && std::abs(corr(i)) >= upsilon)
            hits.emplace_back(real.ids[i], corr(i));
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Detection det;
    det.coeffs.resize(static_cast<Eigen::Index>(hits.size()));
    for (std::size_t i = 0; i < hits.size(); ++i) {
        det.support.push_back(hits[i].first);
        det.coeffs(static_cast<Eigen::Index>(i)) = hits[i].second;
    }
    return det;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
            !(step > 0.0) || hi < lo)
            throw ConfigError("bad grid range '" + text + "'");
        for (double v = lo; v <= hi + 1e-9 * step; v += step) grid.push_back(v);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                grid.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("bad grid value '" + tok + "'");
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty()) throw ConfigError("empty sweep grid");
    return grid;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, T (*parse)(const std::string&)) {
    std::vector<T> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(parse(tok.substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace

std::string detector_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::ta_omp: return "ta_omp";
        case DetectorKind::ta_sp: return "ta_sp";
        case DetectorKind::lasso: return "lasso";
        case DetectorKind::zc_op_baseline: return "zc_op_baseline";
    }
    throw ConfigError("unknown detector kind");
}

DetectorKind parse_detector(const std::string& name) {
    if (name == "ta_omp") return DetectorKind::ta_omp;
    if (name == "ta_sp") return DetectorKind::ta_sp;
    if (name == "lasso") return DetectorKind::lasso;
    if (name == "zc_op_baseline") return DetectorKind::zc_op_baseline;
    throw ConfigError("unknown detector '" + name + "'");
}

std::string sweep_var_name(SweepVar var) {
    switch (var) {
        case SweepVar::N: return "N";
        case SweepVar::P: return "P";
        case SweepVar::D1: return "D1";
        case SweepVar::M: return "M";
        case SweepVar::sigma2: return "sigma2";
        case SweepVar::M_SB: return "M_SB";
        case SweepVar::alpha: return "alpha";
    }
    throw ConfigError("unknown sweep variable");
}

SweepVar parse_sweep_var(const std::string& name) {
    if (name == "N") return SweepVar::N;
    if (name == "P") return SweepVar::P;
    if (name == "D1") return SweepVar::D1;
    if (name == "M") return SweepVar::M;
    if (name == "sigma2") return SweepVar::sigma2;
    if (name == "M_SB") return SweepVar::M_SB;
    if (name == "alpha") return SweepVar::alpha;
    throw ConfigError("unknown sweep variable '" + name + "'");
}

OutputKind parse_output(const std::string& name) {
    if (name == "p_per") return OutputKind::p_per;
    if (name == "nmse") return OutputKind::nmse;
    if (name == "rate") return OutputKind::rate;
    if (name == "ee") return OutputKind::ee;
    if (name == "apce") return OutputKind::apce;
    throw ConfigError("unknown output '" + name + "'");
}

void ExperimentSpec::validate() const {
    base.validate();
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ConfigError("sweep grid must be sorted");
    if (trials < 1) throw ConfigError("trials must be >= 1");
}

bool ExperimentSpec::wants(OutputKind k) const {
    if (outputs.empty()) return true;
    return std::find(outputs.begin(), outputs.end(), k) != outputs.end();
}

NetworkConfig apply_sweep_value(NetworkConfig cfg, SweepVar var, double value) {
    switch (var) {
        case SweepVar::N:
            cfg.n_devices = static_cast<int>(std::lround(value));
            break;
        case SweepVar::P:
            cfg.tx_power_w = dbm_to_watts(value);
            break;
        case SweepVar::D1:
            cfg.d1_m = value;
            break;
        case SweepVar::M:
            cfg.preamble_len = static_cast<int>(std::lround(value));
            break;
        case SweepVar::sigma2:
            cfg.noise_w = dbm_to_watts(value);
            break;
        case SweepVar::M_SB:
            cfg.m_subbands = static_cast<int>(std::lround(value));
            break;
        case SweepVar::alpha:
            cfg.alpha = value;
            break;
    }
    return cfg;
}

std::uint64_t hash_config(const NetworkConfig& cfg) {
    const std::string text = config_to_text(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

PointReport run_point(const NetworkConfig& cfg,
                      const std::vector<DetectorKind>& detectors, int trials,
                      std::uint64_t master_seed, int point_index,
                      double lambda0_per_m2,
                      const std::vector<OutputKind>& outputs) {
    cfg.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const auto wants = [&outputs](OutputKind k) {
        return outputs.empty() ||
               std::find(outputs.begin(), outputs.end(), k) != outputs.end();
    };

    PointReport rep;
    rep.config = cfg;
    rep.trials = trials;
    rep.master_seed = master_seed;
    rep.config_hash = hash_config(cfg);
    rep.timestamp = utc_now();

    AnalyticalReport& an = rep.analytical;
    an.p0 = p0(cfg);
    an.p_per = p_per(cfg);
    an.k_max = k_max(cfg);
    an.amp_threshold = amp_threshold(cfg);
    an.xi_mean = xi_mean(cfg);
    an.p_dev_bar = avg_power_dev(cfg);
    an.ee = ee(cfg);
    an.apce = lambda0_per_m2 > 0.0 ? apce(cfg, lambda0_per_m2)
                                   : cfg.n_devices * an.p_per;
    const int j_hi = std::min(an.k_max, cfg.preamble_len - 4);
    for (int j = 1; j <= j_hi; ++j) an.mse_by_j.emplace_back(j, mse_j(cfg, j));
    if (wants(OutputKind::nmse)) an.avg_nmse = avg_nmse(cfg);
    if (wants(OutputKind::rate)) an.avg_rate = avg_rate(cfg);

    if (detectors.empty()) return rep;

    std::vector<DetectorAccum> accums(detectors.size());
    for (std::size_t d = 0; d < detectors.size(); ++d)
        accums[d].kind = detectors[d];

    const bool need_matrix = std::any_of(detectors.begin(), detectors.end(),
                                         is_matrix_detector);
    const bool need_workspace =
        std::any_of(detectors.begin(), detectors.end(), [](DetectorKind k) {
            return k == DetectorKind::ta_omp || k == DetectorKind::ta_sp;
        });
    const bool need_zc =
        std::any_of(detectors.begin(), detectors.end(), [](DetectorKind k) {
            return k == DetectorKind::zc_op_baseline;
        });

    const double ups = amp_threshold(cfg);
    const double gamma_reg = ups / cfg.c3;
    const int k_cap = k_max(cfg);
    const double noise_floor = cfg.preamble_len * cfg.noise_w;
    const int zc_pool = largest_prime_leq(cfg.preamble_len);
    std::vector<int> assignment(cfg.n_devices);
    for (int id = 0; id < cfg.n_devices; ++id)
        assignment[id] = id % cfg.m_subbands;

    std::vector<int> active_pos(cfg.n_devices, -1);

    for (int t = 0; t < trials; ++t) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(point_index),
                      static_cast<std::uint64_t>(t));
        const Realization real = sample_realization(cfg, rng);
        const PreambleMatrix phi =
            gen_gaussian_preambles(cfg.preamble_len, cfg.n_devices, rng);
        const PreambleRx rx = synth_preamble_rx(real, phi, cfg, rng);

        std::optional<CollisionOutcome> zc_coll;
        Eigen::VectorXcd zc_corr;
        if (need_zc) {
            zc_coll = op_preamble_collision(real.k_active, zc_pool, rng);
            zc_corr.resize(real.k_active);
            const double s = std::sqrt(cfg.noise_w);
            for (int i = 0; i < real.k_active; ++i)
                zc_corr(i) = rx.q(i) + s * rng.cnormal();
        }

        std::optional<AudWorkspace> ws;
        if (need_workspace) ws = make_aud_workspace(phi.cols, rx.y0);

        std::vector<int> truth = real.ids;
        std::sort(truth.begin(), truth.end());
        for (int i = 0; i < real.k_active; ++i) active_pos[real.ids[i]] = i;

        for (auto& acc : accums) {
            Detection det;
            bool failed = false;
            try {
                switch (acc.kind) {
                    case DetectorKind::ta_omp:
                        det = ta_omp(*ws, ups, cfg.noise_w);
                        break;
                    case DetectorKind::ta_sp:
                        det = ta_sp(*ws, ups, k_cap, cfg.noise_w);
                        break;
                    case DetectorKind::lasso:
                        det = lasso_ista(rx.y0, phi.cols, gamma_reg, 2000,
                                         1e-3 * gamma_reg, ups);
                        break;
                    case DetectorKind::zc_op_baseline:
                        det = detect_zc_baseline(real, zc_corr, *zc_coll, ups);
                        break;
                }
            } catch (const std::exception&) {
                failed = true;
                det = Detection{};
            }
            if (failed || !det.converged) ++acc.failures;

            const EventClass ev = classify_event(truth, det.support);
            acc.p_per.add(ev == EventClass::event1 ? 1.0 : 0.0);
            if (ev == EventClass::event3) continue;

            std::vector<int> det_pos;
            det_pos.reserve(det.support.size());
            for (int id : det.support) det_pos.push_back(active_pos[id]);

            acc.rate_noma.add(sic_rates(rx.q, det_pos, noise_floor).aggregate);
            acc.rate_oma.add(
                ofdma_rates(real, rx.q, det_pos, assignment, cfg).aggregate);

            if (!det.support.empty()) {
                Eigen::VectorXcd q_true(det.coeffs.size());
                for (Eigen::Index i = 0; i < q_true.size(); ++i)
                    q_true(i) = rx.q(det_pos[static_cast<std::size_t>(i)]);
                try {
                    const Eigen::VectorXcd q_hat =
                        acc.kind == DetectorKind::zc_op_baseline
                            ? det.coeffs
                            : ls_estimate(rx.y0, phi.cols, det.support);
                    acc.nmse.add(empirical_nmse(q_true, q_hat));
                } catch (const std::exception&) {
                    ++acc.failures;
                }
            }
        }

        for (int i = 0; i < real.k_active; ++i) active_pos[real.ids[i]] = -1;
    }

    const double ee_scale = cfg.p_act / avg_power_dev(cfg);
    for (const auto& acc : accums) {
        DetectorStats st;
        st.kind = acc.kind;
        st.p_per = acc.p_per.summary();
        st.nmse = acc.nmse.summary();
        st.rate_noma = acc.rate_noma.summary();
        st.rate_oma = acc.rate_oma.summary();
        st.failures = acc.failures;
        st.ee = scaled(st.p_per, ee_scale);
        if (lambda0_per_m2 <= 0.0)
            st.apce = scaled(st.p_per, static_cast<double>(cfg.n_devices));
        rep.detectors.push_back(std::move(st));
    }
    return rep;
}

std::vector<PointReport> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<PointReport> points;
    points.reserve(spec.grid.size());
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        NetworkConfig cfg = apply_sweep_value(spec.base, spec.var, spec.grid[i]);
        PointReport rep =
            run_point(cfg, spec.detectors, spec.trials, spec.master_seed,
                      static_cast<int>(i), spec.lambda0_per_m2, spec.outputs);
        rep.sweep_value = spec.grid[i];
        points.push_back(std::move(rep));
    }
    return points;
}

namespace {

void csv_row(std::ostream& out, const std::string& var, double value,
             const char* metric, const std::string& source, double mean,
             double lo, double hi) {
    out << var << ',' << fmt_num(value) << ',' << metric << ',' << source << ','
        << fmt_num(mean) << ',' << fmt_num(lo) << ',' << fmt_num(hi) << '\n';
}

void csv_stat_row(std::ostream& out, const std::string& var, double value,
                  const char* metric, const std::string& source,
                  const EmpiricalStat& st) {
    if (st.n == 0) return;
    csv_row(out, var, value, metric, source, st.mean, st.ci_lo, st.ci_hi);
}

}  // namespace

void write_csv(std::ostream& out, const std::string& var_name,
               const std::vector<PointReport>& points,
               const std::vector<OutputKind>& outputs) {
    const auto wants = [&outputs](OutputKind k) {
        return outputs.empty() ||
               std::find(outputs.begin(), outputs.end(), k) != outputs.end();
    };
    out << "sweep_var,value,metric,source,mean,ci_lo,ci_hi\n";
    for (const auto& p : points) {
        const double v = p.sweep_value;
        const AnalyticalReport& an = p.analytical;
        if (wants(OutputKind::p_per))
            csv_row(out, var_name, v, "p_per", "analytic", an.p_per, an.p_per,
                    an.p_per);
        csv_row(out, var_name, v, "k_max", "analytic", an.k_max, an.k_max,
                an.k_max);
        if (wants(OutputKind::nmse))
            csv_row(out, var_name, v, "nmse", "analytic", an.avg_nmse,
                    an.avg_nmse, an.avg_nmse);
        if (wants(OutputKind::rate))
            csv_row(out, var_name, v, "rate_noma", "analytic", an.avg_rate,
                    an.avg_rate, an.avg_rate);
        if (wants(OutputKind::ee))
            csv_row(out, var_name, v, "ee", "analytic", an.ee, an.ee, an.ee);
        if (wants(OutputKind::apce))
            csv_row(out, var_name, v, "apce", "analytic", an.apce, an.apce,
                    an.apce);
        for (const auto& st : p.detectors) {
            const std::string src = detector_name(st.kind);
            if (wants(OutputKind::p_per))
                csv_stat_row(out, var_name, v, "p_per", src, st.p_per);
            if (wants(OutputKind::nmse))
                csv_stat_row(out, var_name, v, "nmse", src, st.nmse);
            if (wants(OutputKind::rate)) {
                csv_stat_row(out, var_name, v, "rate_noma", src, st.rate_noma);
                csv_stat_row(out, var_name, v, "rate_oma", src, st.rate_oma);
            }
            if (wants(OutputKind::ee))
                csv_stat_row(out, var_name, v, "ee", src, st.ee);
            if (wants(OutputKind::apce))
                csv_stat_row(out, var_name, v, "apce", src, st.apce);
        }
    }
}

void sweep(const ExperimentSpec& spec) {
    const std::vector<PointReport> points = run_sweep(spec);
    const std::string var = sweep_var_name(spec.var);
    if (spec.out_path.empty()) {
        write_csv(std::cout, var, points, spec.outputs);
        std::cout.flush();
        if (!std::cout) throw IoError("writing CSV to stdout failed");
        return;
    }
    std::ofstream out(spec.out_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + spec.out_path);
    write_csv(out, var, points, spec.outputs);
    out.flush();
    if (!out) throw IoError("writing " + spec.out_path + " failed");
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    ExperimentSpec spec;
    bool have_config = false, have_sweep = false, have_grid = false;
    for (const auto& [key, value] : read_kv_file(path)) {
        if (key == "config") {
            std::filesystem::path p = value;
            if (p.is_relative())
                p = std::filesystem::path(path).parent_path() / p;
            spec.base = load_config(p.string());
            have_config = true;
        } else if (key == "sweep") {
            spec.var = parse_sweep_var(value);
            have_sweep = true;
        } else if (key == "grid") {
            spec.grid = parse_grid(value);
            have_grid = true;
        } else if (key == "trials") {
            try {
                spec.trials = std::stoi(value);
            } catch (const std::exception&) {
                throw ConfigError("bad trials '" + value + "'");
            }
        } else if (key == "seed") {
            try {
                spec.master_seed = std::stoull(value);
            } catch (const std::exception&) {
                throw ConfigError("bad seed '" + value + "'");
            }
        } else if (key == "detectors") {
            spec.detectors = parse_list(value, parse_detector);
        } else if (key == "outputs") {
            spec.outputs = parse_list(value, parse_output);
        } else if (key == "lambda0_per_km2") {
            try {
                spec.lambda0_per_m2 = std::stod(value) * 1e-6;
            } catch (const std::exception&) {
                throw ConfigError("bad lambda0_per_km2 '" + value + "'");
            }
        } else if (key == "out") {
            std::filesystem::path p = value;
            if (p.is_relative())
                p = std::filesystem::path(path).parent_path() / p;
            spec.out_path = p.string();
        } else {
            throw ConfigError(path + ": unknown spec key '" + key + "'");
        }
    }
    if (!have_config) throw ConfigError(path + ": missing 'config' key");
    if (!have_sweep) throw ConfigError(path + ": missing 'sweep' key");
    if (!have_grid) throw ConfigError(path + ": missing 'grid' key");
    spec.validate();
    return spec;
}

}  // namespace gfnoma
