#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gfnoma/analysis.hpp"
#include "gfnoma/network.hpp"

namespace gfnoma {

enum class DetectorKind { ta_omp, ta_sp, lasso, zc_op_baseline };
enum class SweepVar { N, P, D1, M, sigma2, M_SB, alpha };
enum class OutputKind { p_per, nmse, rate, ee, apce };

std::string detector_name(DetectorKind kind);
DetectorKind parse_detector(const std::string& name);
std::string sweep_var_name(SweepVar var);
SweepVar parse_sweep_var(const std::string& name);
OutputKind parse_output(const std::string& name);

struct ExperimentSpec {
    NetworkConfig base;
    SweepVar var = SweepVar::N;
    std::vector<double> grid;
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<DetectorKind> detectors;
    std::vector<OutputKind> outputs;  // empty means all
    double lambda0_per_m2 = 0.0;      // 0 keeps the configured device count
    std::string out_path;             // empty writes to stdout

    void validate() const;
    bool wants(OutputKind k) const;
};

// Sweep values carry the unit of their key: P and sigma2 in dBm, D1 in
// meters, the rest dimensionless counts.
NetworkConfig apply_sweep_value(NetworkConfig cfg, SweepVar var, double value);

struct EmpiricalStat {
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int n = 0;  // trials contributing; 0 suppresses the CSV row
};

struct DetectorStats {
    DetectorKind kind = DetectorKind::ta_omp;
    EmpiricalStat p_per;
    EmpiricalStat nmse;       // Events 1-2 with nonempty detection
    EmpiricalStat rate_noma;  // Events 1-2, bits per channel use
    EmpiricalStat rate_oma;
    EmpiricalStat ee;
    EmpiricalStat apce;
    int failures = 0;  // trials where the detector threw; counted, not fatal
};

// One grid point. Everything except the timestamp is a pure function of
// (config, detectors, trials, master_seed, point_index); the CSV emitter
// ignores the timestamp so emitted rows are reproducible.
struct PointReport {
    double sweep_value = 0.0;
    NetworkConfig config;
    AnalyticalReport analytical;
    std::vector<DetectorStats> detectors;
    int trials = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t config_hash = 0;
    std::string timestamp;
};

std::uint64_t hash_config(const NetworkConfig& cfg);

PointReport run_point(const NetworkConfig& cfg,
                      const std::vector<DetectorKind>& detectors, int trials,
                      std::uint64_t master_seed, int point_index = 0,
                      double lambda0_per_m2 = 0.0,
                      const std::vector<OutputKind>& outputs = {});

std::vector<PointReport> run_sweep(const ExperimentSpec& spec);

// Long-format rows: sweep_var,value,metric,source,mean,ci_lo,ci_hi. Analytic
// rows repeat the mean in both CI columns; a k_max row is always present.
void write_csv(std::ostream& out, const std::string& var_name,
               const std::vector<PointReport>& points,
               const std::vector<OutputKind>& outputs);

// Runs the sweep and writes CSV to spec.out_path (stdout when empty).
void sweep(const ExperimentSpec& spec);

// Spec file: flat key=value with keys config (path, relative to the spec
// file), sweep, grid (lo:hi:step or comma list), trials, seed, detectors,
// outputs, lambda0_per_km2, out.
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace gfnoma
