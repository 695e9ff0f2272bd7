#pragma once

#include <utility>
#include <vector>

#include "muxsim/events.hpp"
#include "muxsim/rng.hpp"
#include "muxsim/time_grid.hpp"

namespace muxsim {

/// Optical losses and delays of the idler multiplexing chain.
///
/// The delay network is binary-divided: stage s contributes 2^(s-1) bins of
/// delay, so a total delay of D bins traverses popcount(D) delay branches,
/// each adding long_path_extra_loss_db on top of the switch insertion loss
/// common to every path. With one stage this reduces to the long/short pair:
/// the long path carries the single extra-loss term.
struct ChannelParams {
    double signal_transmission = 1.0;
    double idler_base_transmission = 1.0;
    double switch_insertion_loss_db = 1.0;
    int n_switches = 2; // m stages use m + 1 switches
    double long_path_extra_loss_db = 1.0;
    double predelay_ns = 600.0; // ~120 m of fiber ahead of the switches
    double long_path_delay_ns = 100.0;

    void validate(const TimeGrid& grid) const;

    /// Transmission through all switches (every path crosses all of them).
    double switch_transmission() const;
    /// Base transmission x switches: the zero-delay (short) path.
    double short_path_transmission() const;
    /// Full path survival for a delay of delay_bins bins.
    double path_transmission(int delay_bins) const;
};

/// Beamsplitter + fiber spool used to measure g2(0) with a single detector:
/// one output port is observed directly, the other via arm_delay_ns.
struct G2SplitterParams {
    double split_ratio = 0.5;
    double arm_delay_ns = 500.0;

    void validate(const TimeGrid& grid) const;
};

/// Survival probability of a loss in dB: 10^(-dB/10). Rejects negative loss.
double db_to_transmission(double loss_db);

/// Independent survival per event with the given transmission, order kept.
void bernoulli_thin(std::vector<PairEvent>& events, double transmission, RandomStream& rng);

/// Switch-network state for one cycle, produced by the controller.
struct RoutingPlan {
    bool open = false;  // closed = no routing, no gate
    int deciding_bin = -1;
    std::uint64_t deciding_pair = Detection::dark_origin;
    double herald_t_ns = 0.0;   // cycle-relative
    double command_t_ns = 0.0;  // cycle-relative; valid when commanded
    bool commanded = false;     // static routing issues no command
    double settle_ns = 0.0;
    int delay_bins = 0;
    double gate_start_ns = 0.0; // cycle-relative, includes the pre-delay
    double gate_width_ns = 0.0;
};

/// Propagates idler photons of one cycle through pre-delay, switches and the
/// selected delay path. Returned timestamps are cycle-relative and include
/// the pre-delay, so photons from the selected bin land inside the gate
/// window. Photons reaching the network while a switch settles are dropped.
std::vector<PairEvent> route_idler(const std::vector<PairEvent>& events, const RoutingPlan& plan,
                                   const ChannelParams& ch, const TimeGrid& grid,
                                   RandomStream& rng);

/// Splits events between the direct port and the delayed port. Port-3 events
/// come back shifted by arm_delay_ns.
std::pair<std::vector<PairEvent>, std::vector<PairEvent>>
split_for_g2(const std::vector<PairEvent>& events, const G2SplitterParams& p, RandomStream& rng);

} // namespace muxsim
