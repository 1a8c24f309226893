#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gfnoma/analysis.hpp"
#include "gfnoma/calibrate.hpp"
#include "gfnoma/config_io.hpp"
#include "gfnoma/errors.hpp"
#include "gfnoma/harness.hpp"
#include "gfnoma/network.hpp"
#include "gfnoma/optimize.hpp"

namespace {

using namespace gfnoma;

void print_report(const AnalyticalReport& rep) {
    std::printf("p0 = %.12g\n", rep.p0);
    std::printf("p_per = %.12g\n", rep.p_per);
    std::printf("k_max = %d\n", rep.k_max);
    std::printf("amp_threshold = %.12g\n", rep.amp_threshold);
    std::printf("xi_mean = %.12g\n", rep.xi_mean);
    std::printf("avg_nmse = %.12g\n", rep.avg_nmse);
    std::printf("avg_rate = %.12g\n", rep.avg_rate);
    std::printf("p_dev_w = %.12g\n", rep.p_dev_bar);
    std::printf("ee = %.12g\n", rep.ee);
    std::printf("apce = %.12g\n", rep.apce);
    std::printf("mse_by_j = ");
    for (std::size_t i = 0; i < rep.mse_by_j.size(); ++i)
        std::printf("%s%d:%.6g", i ? "," : "", rep.mse_by_j[i].first,
                    rep.mse_by_j[i].second);
    std::printf("\n");
}

int run(int argc, char** argv) {
    CLI::App app{"Grant-free NOMA uplink: analytical evaluation, Monte Carlo "
                 "simulation, parameter sweeps, design optimization"};
    app.require_subcommand(1);

    std::string config_path, spec_path, anchors_path, out_path, objective;
    double lambda0_km2 = 0.0, min_pper = 0.0;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<std::string> detector_names;

    auto* analyze_cmd = app.add_subcommand("analyze", "Print the closed-form metrics of one configuration");
    analyze_cmd->add_option("config", config_path, "key=value config file")->required();
    analyze_cmd->add_option("--lambda0", lambda0_km2, "device density per km^2 for APCE");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo at one configuration, CSV to stdout");
    sim_cmd->add_option("config", config_path)->required();
    sim_cmd->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", seed, "master seed");
    sim_cmd->add_option("--detector", detector_names,
                        "ta_omp | ta_sp | lasso | zc_op_baseline (repeatable)");
    sim_cmd->add_option("--lambda0", lambda0_km2, "device density per km^2 for APCE");
    sim_cmd->add_option("--out", out_path, "CSV file (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep described by a spec file");
    sweep_cmd->add_option("spec", spec_path, "sweep spec file")->required();

    auto* opt_cmd = app.add_subcommand("optimize", "Maximize EE over P or APCE over D1");
    opt_cmd->add_option("objective", objective, "ee | apce")->required();
    opt_cmd->add_option("config", config_path)->required();
    opt_cmd->add_option("--min-pper", min_pper, "also report the p_per-constrained solution");
    opt_cmd->add_option("--lambda0", lambda0_km2, "device density per km^2 (required for apce)");

    auto* cal_cmd = app.add_subcommand("calibrate", "Fit (c2, c3) to anchor operating points");
    cal_cmd->add_option("anchors", anchors_path, "anchors file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (analyze_cmd->parsed()) {
        const NetworkConfig cfg = load_config(config_path);
        print_report(analyze(cfg, lambda0_km2 * 1e-6));
    } else if (sim_cmd->parsed()) {
        const NetworkConfig cfg = load_config(config_path);
        std::vector<DetectorKind> dets;
        for (const auto& n : detector_names) dets.push_back(parse_detector(n));
        PointReport rep =
            run_point(cfg, dets, trials, seed, 0, lambda0_km2 * 1e-6);
        if (out_path.empty()) {
            write_csv(std::cout, "point", {rep}, {});
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw IoError("cannot open output file " + out_path);
            write_csv(out, "point", {rep}, {});
            if (!out.flush()) throw IoError("writing " + out_path + " failed");
        }
    } else if (sweep_cmd->parsed()) {
        sweep(load_experiment_spec(spec_path));
    } else if (opt_cmd->parsed()) {
        const NetworkConfig cfg = load_config(config_path);
        OptResult res;
        if (objective == "ee") {
            res = optimize_ee(cfg, min_pper);
            std::printf("optimum_tx_power_dbm = %.4f\n", res.arg_opt);
            std::printf("ee_at_optimum = %.6g\n", res.value_opt);
            std::printf("p_per_at_optimum = %.6g\n", res.p_per_at_opt);
            if (res.has_constraint) {
                std::printf("constrained_tx_power_dbm = %.4f\n", res.constrained_arg);
                std::printf("ee_at_constraint = %.6g\n", res.constrained_value);
            }
        } else if (objective == "apce") {
            if (!(lambda0_km2 > 0.0))
                throw ConfigError("optimize apce needs --lambda0 > 0");
            res = optimize_apce(cfg, lambda0_km2 * 1e-6, min_pper);
            std::printf("optimum_d1_m = %.4f\n", res.arg_opt);
            std::printf("apce_at_optimum = %.6g\n", res.value_opt);
            std::printf("p_per_at_optimum = %.6g\n", res.p_per_at_opt);
            if (res.has_constraint) {
                std::printf("constrained_d1_m = %.4f\n", res.constrained_arg);
                std::printf("apce_at_constraint = %.6g\n", res.constrained_value);
            }
        } else {
            throw ConfigError("objective must be ee or apce");
        }
    } else if (cal_cmd->parsed()) {
        const auto anchors = load_anchors(anchors_path);
        const CalibrationResult res = calibrate_constants(anchors);
        std::printf("c1 = %.12g\n", res.c1);
        std::printf("c2 = %.12g\n", res.c2);
        std::printf("c3 = %.12g\n", res.c3);
        std::fprintf(stderr, "residual = %.6g\n", res.residual);
        for (std::size_t i = 0; i < res.achieved.size(); ++i)
            std::fprintf(stderr, "anchor %zu: achieved p_per = %.6g (target %.6g)\n",
                         i, res.achieved[i], anchors[i].target_p_per);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
