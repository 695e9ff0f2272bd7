#include "muxsim/optics.hpp"

#include <bit>
#include <cmath>

#include "muxsim/errors.hpp"

namespace muxsim {

double db_to_transmission(double loss_db) {
    if (loss_db < 0.0) {
        throw std::invalid_argument("db_to_transmission: loss must be >= 0 dB");
    }
    return std::pow(10.0, -loss_db / 10.0);
}

void ChannelParams::validate(const TimeGrid& grid) const {
    if (signal_transmission < 0.0 || signal_transmission > 1.0) {
        throw config_error("channel.signal_transmission must lie in [0, 1]");
    }
    if (idler_base_transmission < 0.0 || idler_base_transmission > 1.0) {
        throw config_error("channel.idler_base_transmission must lie in [0, 1]");
    }
    if (switch_insertion_loss_db < 0.0) {
        throw config_error("channel.switch_insertion_loss_db must be >= 0");
    }
    if (n_switches < 0) {
        throw config_error("channel.n_switches must be >= 0");
    }
    if (long_path_extra_loss_db < 0.0) {
        throw config_error("channel.long_path_extra_loss_db must be >= 0");
    }
    if (predelay_ns < 0.0) {
        throw config_error("channel.predelay_ns must be >= 0");
    }
    // The stage delay must equal the bin width, otherwise no routing choice
    // can move a photon from its bin into the output window.
    if (long_path_delay_ns != grid.bin_width_ns) {
        throw config_error("channel.long_path_delay_ns must equal grid.bin_width_ns");
    }
}

double ChannelParams::switch_transmission() const {
    return db_to_transmission(switch_insertion_loss_db * n_switches);
}

double ChannelParams::short_path_transmission() const {
    return idler_base_transmission * switch_transmission();
}

double ChannelParams::path_transmission(int delay_bins) const {
    const int branches = std::popcount(static_cast<unsigned>(delay_bins));
    return short_path_transmission() * db_to_transmission(long_path_extra_loss_db * branches);
}

void G2SplitterParams::validate(const TimeGrid& grid) const {
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw config_error("g2.split_ratio must lie in (0, 1)");
    }
    if (arm_delay_ns <= 0.0) {
        throw config_error("g2.arm_delay_ns must be > 0");
    }
    // The delayed window must not overlap the gate comb of later cycles.
    const double period = grid.cycle_period_ns();
    const double r = arm_delay_ns - std::floor(arm_delay_ns / period) * period;
    if (r < grid.bin_width_ns - 1e-9 || r > period - grid.bin_width_ns + 1e-9) {
        throw config_error("g2.arm_delay_ns places the delayed window onto a gate");
    }
}

void bernoulli_thin(std::vector<PairEvent>& events, double transmission, RandomStream& rng) {
    if (transmission < 0.0 || transmission > 1.0) {
        throw std::invalid_argument("bernoulli_thin: transmission must lie in [0, 1]");
    }
    if (transmission >= 1.0) return;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (rng.bernoulli(transmission)) {
            events[kept++] = events[i];
        }
    }
    events.resize(kept);
}

std::vector<PairEvent> route_idler(const std::vector<PairEvent>& events, const RoutingPlan& plan,
                                   const ChannelParams& ch, const TimeGrid& grid,
                                   RandomStream& rng) {
    std::vector<PairEvent> out;
    if (!plan.open) return out;

    const int max_delay = grid.bins_per_cycle - 1;
    if (plan.delay_bins < 0 || plan.delay_bins > max_delay) {
        throw config_error("route_idler: selected delay cannot reach the output window");
    }
    const double transmission = ch.path_transmission(plan.delay_bins);
    const double shift = ch.predelay_ns + plan.delay_bins * ch.long_path_delay_ns;

    out.reserve(events.size());
    for (const PairEvent& ev : events) {
        const double at_network = ev.t_ns + ch.predelay_ns;
        if (plan.commanded && at_network >= plan.command_t_ns &&
            at_network < plan.command_t_ns + plan.settle_ns) {
            continue; // lost in the switch transient
        }
        if (!rng.bernoulli(transmission)) continue;
        PairEvent moved = ev;
        moved.t_ns = ev.t_ns + shift;
        out.push_back(moved);
    }
    return out;
}

std::pair<std::vector<PairEvent>, std::vector<PairEvent>>
split_for_g2(const std::vector<PairEvent>& events, const G2SplitterParams& p, RandomStream& rng) {
    std::vector<PairEvent> direct;
    std::vector<PairEvent> delayed;
    for (const PairEvent& ev : events) {
        if (rng.bernoulli(p.split_ratio)) {
            direct.push_back(ev);
        } else {
            PairEvent moved = ev;
            moved.t_ns += p.arm_delay_ns;
            delayed.push_back(moved);
        }
    }
    return {std::move(direct), std::move(delayed)};
}

} // namespace muxsim
