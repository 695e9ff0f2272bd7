#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "muxsim/events.hpp"
#include "muxsim/optics.hpp"
#include "muxsim/tally.hpp"

namespace muxsim {

/// True coincidence iff the click is the partner of the herald that produced
/// this cycle's decision; dark clicks and foreign pairs are accidentals.
inline bool classify_gated_click(const Detection& click, const RoutingPlan& plan) {
    return !click.is_dark() && plan.deciding_pair != Detection::dark_origin &&
           click.pair_id == plan.deciding_pair;
}

struct Uncertain {
    double value = 0.0;
    double se = 0.0;
};

/// Coincidence-to-accidental ratio C/A. Undefined (throws) when A = 0.
double car(const Tally& t);

/// Experiment-style CAR: measured gated clicks over the uncorrelated-trigger
/// accidental estimate. Undefined (throws) when the estimate is zero.
double car_shifted(const Tally& t);

/// Coincidence-rate ratio of an enabled run over a disabled run taken with
/// the same seed and source strength. Throws when disabled.C = 0.
double improvement_factor(const Tally& enabled, const Tally& disabled);

/// Heralded second-order coherence estimate C123 * H / (R12 * R13).
/// Throws when R12 or R13 is zero.
double g2_estimate(const Tally& t);

/// Delete-one jackknife over partition tallies. Returns nothing if the
/// statistic is undefined on the totals.
std::optional<Uncertain> jackknife(const std::vector<Tally>& partitions,
                                   const std::function<double(const Tally&)>& stat);

/// Jackknife for paired-run statistics (ratios across modes). Partition
/// vectors must be aligned (same cycle ranges).
std::optional<Uncertain> jackknife_paired(
    const std::vector<Tally>& a, const std::vector<Tally>& b,
    const std::function<double(const Tally&, const Tally&)>& stat);

/// Figures of merit for one run.
struct MetricsReport {
    std::uint64_t cycles = 0;
    double duration_s = 0.0;
    double signal_cps = 0.0;
    double brightness_cps = 0.0;
    std::optional<Uncertain> car;
    std::optional<Uncertain> car_shifted;
    std::optional<Uncertain> g2;
};

MetricsReport build_report(const std::vector<Tally>& partitions, std::uint64_t cycles);

/// Enabled-over-disabled ratios from paired runs.
struct RatioReport {
    std::optional<Uncertain> improvement_factor;
    std::optional<Uncertain> g2_ratio;
    std::optional<Uncertain> car_ratio;
};

RatioReport build_ratio_report(const std::vector<Tally>& enabled,
                               const std::vector<Tally>& disabled);

} // namespace muxsim
