#include "muxsim/runner.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "muxsim/errors.hpp"

namespace muxsim {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

RunRow base_row(const RunRequest& req, MuxMode mode) {
    RunRow row;
    row.mode = mode == MuxMode::enabled ? "enabled" : "disabled";
    row.geometry = req.geometry == Geometry::direct ? "direct" : "split";
    row.cycles = static_cast<std::uint64_t>(req.cycles);
    row.seed = req.cfg.seed;
    row.mu = req.cfg.source.effective_mu();
    row.stages = req.cfg.grid.stages();
    return row;
}

RunRow make_mode_row(const RunRequest& req, MuxMode mode, const PartitionedRun& run) {
    RunRow row = base_row(req, mode);
    const MetricsReport report = build_report(run.partitions, row.cycles);
    row.duration_s = report.duration_s;
    row.counts = run.total;
    row.signal_cps = report.signal_cps;
    row.brightness_cps = report.brightness_cps;
    row.car = report.car;
    row.car_shifted = report.car_shifted;
    row.g2 = report.g2;
    return row;
}

PartitionedRun run_one(const RunRequest& req, MuxMode mode, std::string* trace) {
    return run_cycles(req.cfg, mode, req.geometry, req.cycles, req.partitions, req.threads,
                      trace);
}

} // namespace

std::vector<RunRow> run_experiment(const RunRequest& req) {
    req.cfg.validate();

    std::string trace;
    std::string* trace_ptr = req.trace_path.empty() ? nullptr : &trace;

    std::vector<RunRow> rows;
    if (req.cfg.mode == RunMode::enabled || req.cfg.mode == RunMode::both) {
        if (trace_ptr) trace += "# mode=enabled\n";
        const PartitionedRun run = run_one(req, MuxMode::enabled, trace_ptr);
        rows.push_back(make_mode_row(req, MuxMode::enabled, run));
        if (req.cfg.mode == RunMode::both) {
            if (trace_ptr) trace += "# mode=disabled\n";
            const PartitionedRun disabled = run_one(req, MuxMode::disabled, trace_ptr);
            rows.push_back(make_mode_row(req, MuxMode::disabled, disabled));

            RunRow ratio = base_row(req, MuxMode::enabled);
            ratio.mode = "ratio";
            ratio.duration_s = run.total.duration_s;
            const RatioReport rr = build_ratio_report(run.partitions, disabled.partitions);
            ratio.improvement_factor = rr.improvement_factor;
            ratio.g2_ratio = rr.g2_ratio;
            ratio.car_ratio = rr.car_ratio;
            rows.push_back(ratio);
        }
    } else {
        if (trace_ptr) trace += "# mode=disabled\n";
        const PartitionedRun run = run_one(req, MuxMode::disabled, trace_ptr);
        rows.push_back(make_mode_row(req, MuxMode::disabled, run));
    }

    if (trace_ptr) {
        std::ofstream out(req.trace_path);
        if (!out) throw sim_error("cannot open trace file: " + req.trace_path);
        out << trace;
    }
    return rows;
}

std::vector<RunRow> run_sweep(const RunRequest& req, const std::string& axis,
                              const std::vector<double>& values) {
    std::vector<RunRow> rows;
    for (double value : values) {
        RunRequest point = req;
        point.cfg = with_axis_value(req.cfg, axis, value);
        if (!req.trace_path.empty()) {
            point.trace_path = req.trace_path + "." + format_double(value);
        }
        for (RunRow row : run_experiment(point)) {
            row.axis = axis;
            row.axis_value = value;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<RunRow>& rows) {
    out << "# photon-mux-sim v1\n";
    out << "axis,axis_value,mode,geometry,cycles,seed,mu,stages,duration_s,"
           "S,H,W,C,A,A_shifted,R12,R13,C123,"
           "signal_cps,brightness_cps,car,car_se,car_shifted,car_shifted_se,g2,g2_se,"
           "improvement_factor,improvement_factor_se,g2_ratio,g2_ratio_se,car_ratio,car_ratio_se\n";

    auto opt_num = [&](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    auto opt_unc = [&](const std::optional<Uncertain>& v) {
        if (!v) return std::string(",");
        return format_double(v->value) + "," + format_double(v->se);
    };

    for (const RunRow& row : rows) {
        out << row.axis << ',' << opt_num(row.axis_value) << ',' << row.mode << ','
            << row.geometry << ',' << row.cycles << ',' << row.seed << ','
            << format_double(row.mu) << ',' << row.stages << ',' << format_double(row.duration_s)
            << ',';
        if (row.counts) {
            const Tally& t = *row.counts;
            out << t.S << ',' << t.H << ',' << t.W << ',' << t.C << ',' << t.A << ','
                << t.A_shifted << ',' << t.R12 << ',' << t.R13 << ',' << t.C123 << ',';
        } else {
            out << ",,,,,,,,,";
        }
        out << opt_num(row.signal_cps) << ',' << opt_num(row.brightness_cps) << ','
            << opt_unc(row.car) << ',' << opt_unc(row.car_shifted) << ',' << opt_unc(row.g2)
            << ',' << opt_unc(row.improvement_factor) << ',' << opt_unc(row.g2_ratio) << ','
            << opt_unc(row.car_ratio) << '\n';
    }
}

std::string csv_to_string(const std::vector<RunRow>& rows) {
    std::ostringstream ss;
    write_csv(ss, rows);
    return ss.str();
}

} // namespace muxsim
