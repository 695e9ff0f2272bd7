#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "muxsim/config.hpp"
#include "muxsim/metrics.hpp"
#include "muxsim/simulate.hpp"

namespace muxsim {

struct RunRequest {
    ExperimentConfig cfg;
    std::int64_t cycles = 1000000;
    Geometry geometry = Geometry::direct;
    int partitions = 32;
    int threads = 1;
    std::string trace_path; // empty = no trace
};

/// One CSV row. The column set is fixed; fields that are undefined for a row
/// (ratios on single-mode rows, CAR with zero accidentals, ...) stay empty.
struct RunRow {
    std::string axis;
    std::optional<double> axis_value;
    std::string mode; // enabled | disabled | ratio
    std::string geometry;
    std::uint64_t cycles = 0;
    std::uint64_t seed = 0;
    double mu = 0.0;
    int stages = 0;
    double duration_s = 0.0;
    std::optional<Tally> counts;
    std::optional<double> signal_cps;
    std::optional<double> brightness_cps;
    std::optional<Uncertain> car;
    std::optional<Uncertain> car_shifted;
    std::optional<Uncertain> g2;
    std::optional<Uncertain> improvement_factor;
    std::optional<Uncertain> g2_ratio;
    std::optional<Uncertain> car_ratio;
};

/// Simulate per cfg.mode; "both" produces enabled and disabled rows from the
/// same seed plus a ratio row.
std::vector<RunRow> run_experiment(const RunRequest& req);

/// One run_experiment per axis value, row order following the value list.
std::vector<RunRow> run_sweep(const RunRequest& req, const std::string& axis,
                              const std::vector<double>& values);

/// Fixed, versioned CSV schema; identical inputs produce identical bytes.
void write_csv(std::ostream& out, const std::vector<RunRow>& rows);

std::string csv_to_string(const std::vector<RunRow>& rows);

} // namespace muxsim
