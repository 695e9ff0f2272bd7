#include "muxsim/controller.hpp"

#include <cmath>

#include "muxsim/errors.hpp"

namespace muxsim {

std::string decision_label(const RoutingDecision& d, const TimeGrid& grid) {
    if (!d.open) return "blocked";
    if (grid.bins_per_cycle == 2) {
        return d.bin == 0 ? "early" : "late";
    }
    return "bin" + std::to_string(d.bin);
}

void ControllerConfig::validate(const ChannelParams& ch) const {
    if (decision_latency_ns < 0.0 || switch_settle_ns < 0.0) {
        throw config_error("controller timings must be >= 0");
    }
    if (ch.predelay_ns < decision_latency_ns + switch_settle_ns) {
        throw config_error(
            "controller: predelay_ns must cover decision_latency_ns + switch_settle_ns");
    }
}

RoutingDecision decide(const std::vector<Detection>& herald_clicks, const TimeGrid& grid,
                       MuxMode mode) {
    const int last_bin = grid.bins_per_cycle - 1;
    for (const Detection& click : herald_clicks) {
        int bin = static_cast<int>(std::floor(click.t_ns / grid.bin_width_ns));
        if (bin < 0) bin = 0;
        if (bin > last_bin) bin = last_bin;
        if (mode == MuxMode::disabled && bin != last_bin) {
            continue; // static routing ignores heralds outside the output window
        }
        RoutingDecision d;
        d.open = true;
        d.bin = bin;
        d.herald_t_ns = click.t_ns;
        d.herald_pair = click.pair_id;
        return d;
    }
    return RoutingDecision::blocked();
}

RoutingPlan schedule(const RoutingDecision& decision, const ControllerConfig& cfg,
                     const ChannelParams& ch, const TimeGrid& grid) {
    cfg.validate(ch);

    RoutingPlan plan;
    if (!decision.open) return plan;

    plan.open = true;
    plan.deciding_bin = decision.bin;
    plan.deciding_pair = decision.herald_pair;
    plan.herald_t_ns = decision.herald_t_ns;
    plan.delay_bins = (grid.bins_per_cycle - 1) - decision.bin;
    plan.settle_ns = cfg.switch_settle_ns;
    plan.gate_start_ns = (grid.bins_per_cycle - 1) * grid.bin_width_ns + ch.predelay_ns;
    plan.gate_width_ns = grid.bin_width_ns;
    if (plan.delay_bins > 0) {
        // Zero-delay decisions leave the network in its rest state.
        plan.commanded = true;
        plan.command_t_ns = decision.herald_t_ns + cfg.decision_latency_ns;
    }
    return plan;
}

} // namespace muxsim
