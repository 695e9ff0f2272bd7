// Command-line front end: run / sweep / g2 / analytic / validate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muxsim/analytic.hpp"
#include "muxsim/config.hpp"
#include "muxsim/errors.hpp"
#include "muxsim/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;  // CLI or config problems
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string trace_path;
    std::int64_t cycles = 1000000;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    int threads = 1;
    int partitions = 32;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_run_controls) {
    cmd->add_option("--config", opt.config_path, "JSON config file (defaults when omitted)");
    cmd->add_option("--out", opt.out_path, "output file (stdout when omitted)");
    if (with_run_controls) {
        cmd->add_option("--cycles", opt.cycles, "number of clock cycles to simulate")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", opt.seed, "override config seed");
        cmd->add_option("--mode", opt.mode, "enabled|disabled|both (overrides config)");
        cmd->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--partitions", opt.partitions, "cycle partitions for error estimates")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--trace", opt.trace_path, "write a per-cycle decision trace");
    }
}

muxsim::ExperimentConfig load(const CommonOptions& opt) {
    muxsim::ExperimentConfig cfg = opt.config_path.empty()
                                       ? muxsim::default_config()
                                       : muxsim::load_config_file(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.mode) cfg.mode = muxsim::run_mode_from_name(*opt.mode);
    cfg.validate();
    return cfg;
}

muxsim::RunRequest make_request(const CommonOptions& opt, muxsim::Geometry geometry) {
    muxsim::RunRequest req;
    req.cfg = load(opt);
    req.cycles = opt.cycles;
    req.geometry = geometry;
    req.partitions = opt.partitions;
    req.threads = opt.threads;
    req.trace_path = opt.trace_path;
    return req;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw muxsim::sim_error("cannot open output file: " + out_path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string analytic_rates_csv(const muxsim::ExperimentConfig& cfg) {
    muxsim::OracleParams params = muxsim::OracleParams::from_config(cfg);
    std::ostringstream out;
    out << "# photon-mux-sim v1\n";
    out << "mode,mu,stages,trigger_rate,signal_click_rate,coincidence_rate,accidental_rate,"
           "r12_rate,r13_rate,c123_rate,heralded_g2\n";
    for (muxsim::MuxMode mode : {muxsim::MuxMode::enabled, muxsim::MuxMode::disabled}) {
        const muxsim::OracleRates r = muxsim::oracle_rates(params, mode);
        out << (mode == muxsim::MuxMode::enabled ? "enabled" : "disabled") << ','
            << fmt(params.mu) << ',' << params.stages << ',' << fmt(r.trigger) << ','
            << fmt(r.signal_clicks) << ',' << fmt(r.coincidence) << ',' << fmt(r.accidental)
            << ',' << fmt(r.r12) << ',' << fmt(r.r13) << ',' << fmt(r.c123) << ','
            << fmt(muxsim::heralded_g2(params, mode)) << '\n';
    }
    if (params.stages == 1) {
        out << "# improvement_factor_exact=" << fmt(muxsim::analytic_improvement_factor(params))
            << " improvement_factor_small_mu="
            << fmt(muxsim::improvement_factor_small_mu(params)) << '\n';
    }
    return out.str();
}

std::string stage_scan_csv(const muxsim::ExperimentConfig& cfg, double per_switch_loss_db,
                           int m_max) {
    const double herald_p =
        cfg.channel.signal_transmission * cfg.herald_detector.efficiency;
    const muxsim::StageScan scan = muxsim::optimal_stage_count(
        per_switch_loss_db, cfg.source.effective_mu(), m_max, herald_p);
    std::ostringstream out;
    out << "# photon-mux-sim v1\n";
    out << "m,p1,best\n";
    for (std::size_t i = 0; i < scan.p1.size(); ++i) {
        const int m = static_cast<int>(i) + 1;
        out << m << ',' << fmt(scan.p1[i]) << ',' << (m == scan.best_m ? "*" : "") << '\n';
    }
    return out.str();
}

std::string joint_table_csv(const muxsim::ExperimentConfig& cfg) {
    muxsim::OracleParams params = muxsim::OracleParams::from_config(cfg);
    std::ostringstream out;
    out << "# photon-mux-sim v1\n";
    out << "mode,herald_pattern,output_photons,probability\n";
    for (muxsim::MuxMode mode : {muxsim::MuxMode::enabled, muxsim::MuxMode::disabled}) {
        const muxsim::CycleTable table = muxsim::exact_cycle_probabilities(params, mode);
        for (unsigned pattern = 0; pattern < (1u << table.bins); ++pattern) {
            for (int j = 0; j <= table.cutoff; ++j) {
                const double p = table.at(pattern, j);
                if (p == 0.0) continue;
                out << (mode == muxsim::MuxMode::enabled ? "enabled" : "disabled") << ','
                    << pattern << ',' << j << ',' << fmt(p) << '\n';
            }
        }
    }
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator and exact calculator for a temporally "
                 "multiplexed heralded single-photon source"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "simulate one configuration");
    add_common(run_cmd, run_opt, true);

    CommonOptions sweep_opt;
    std::string sweep_axis;
    std::vector<double> sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "simulate along one config axis");
    add_common(sweep_cmd, sweep_opt, true);
    sweep_cmd->add_option("--axis", sweep_axis, "dotted config key, e.g. source.pump_power_mw")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")
        ->delimiter(',');

    CommonOptions g2_opt;
    CLI::App* g2_cmd =
        app.add_subcommand("g2", "simulate the beamsplitter + delayed-window measurement");
    add_common(g2_cmd, g2_opt, true);

    CommonOptions analytic_opt;
    bool want_rates = false;
    bool want_scan = false;
    std::string joint_table_path;
    double per_switch_loss_db = 1.0;
    int m_max = 4;
    CLI::App* analytic_cmd =
        app.add_subcommand("analytic", "exact per-cycle rates and stage-count scan");
    add_common(analytic_cmd, analytic_opt, false);
    analytic_cmd->add_flag("--rates", want_rates, "emit exact per-cycle rates (default action)");
    analytic_cmd->add_flag("--stage-scan", want_scan, "emit the P1(m) stage table");
    analytic_cmd->add_option("--per-switch-loss-db", per_switch_loss_db,
                             "switch insertion loss for --stage-scan");
    analytic_cmd->add_option("--m-max", m_max, "largest stage count for --stage-scan")
        ->check(CLI::Range(1, 6));
    analytic_cmd->add_option("--joint-table", joint_table_path,
                             "write the exact (pattern, photon-number) table to this file");

    CommonOptions validate_opt;
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config and echo defaults");
    add_common(validate_cmd, validate_opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) {
            const auto rows = muxsim::run_experiment(make_request(run_opt, muxsim::Geometry::direct));
            emit(muxsim::csv_to_string(rows), run_opt.out_path);
        } else if (sweep_cmd->parsed()) {
            const auto rows = muxsim::run_sweep(make_request(sweep_opt, muxsim::Geometry::direct),
                                                sweep_axis, sweep_values);
            emit(muxsim::csv_to_string(rows), sweep_opt.out_path);
        } else if (g2_cmd->parsed()) {
            muxsim::RunRequest req = make_request(g2_opt, muxsim::Geometry::split);
            req.cfg.validate_g2();
            const auto rows = muxsim::run_experiment(req);
            emit(muxsim::csv_to_string(rows), g2_opt.out_path);
        } else if (analytic_cmd->parsed()) {
            const muxsim::ExperimentConfig cfg = load(analytic_opt);
            std::string text;
            if (!want_rates && !want_scan && joint_table_path.empty()) want_rates = true;
            if (want_rates) text += analytic_rates_csv(cfg);
            if (want_scan) text += stage_scan_csv(cfg, per_switch_loss_db, m_max);
            if (!joint_table_path.empty()) {
                emit(joint_table_csv(cfg), joint_table_path);
            }
            if (!text.empty()) emit(text, analytic_opt.out_path);
        } else if (validate_cmd->parsed()) {
            const muxsim::ExperimentConfig cfg = load(validate_opt);
            emit(muxsim::config_to_json(cfg) + "ok\n", validate_opt.out_path);
        }
    } catch (const muxsim::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const muxsim::sim_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
