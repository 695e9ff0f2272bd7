#pragma once

#include <string>
#include <vector>

#include "muxsim/detector.hpp"
#include "muxsim/events.hpp"
#include "muxsim/optics.hpp"
#include "muxsim/time_grid.hpp"

namespace muxsim {

enum class MuxMode { enabled, disabled };

/// Per-cycle routing choice. With one stage the deciding bin maps onto the
/// early/late language; with m stages bin k selects a delay of
/// (2^m - 1 - k) bins. A cycle without a deciding herald stays blocked.
struct RoutingDecision {
    bool open = false;
    int bin = -1;
    double herald_t_ns = 0.0; // cycle-relative earliest deciding click
    std::uint64_t herald_pair = Detection::dark_origin;

    static RoutingDecision blocked() { return {}; }
};

/// Human-readable decision label for traces: blocked / early / late / bin<k>.
std::string decision_label(const RoutingDecision& d, const TimeGrid& grid);

struct ControllerConfig {
    double decision_latency_ns = 150.0;
    double switch_settle_ns = 100.0;

    /// Timing feasibility: the pre-delay must cover latency + settling,
    /// otherwise commands land inside the selected photons' arrival window.
    void validate(const ChannelParams& ch) const;
};

/// Classify one cycle's herald clicks (cycle-relative, time-sorted).
/// Enabled: the earliest click decides. Disabled: switches stay on the
/// zero-delay path and only a click in the final bin triggers the gate.
RoutingDecision decide(const std::vector<Detection>& herald_clicks, const TimeGrid& grid,
                       MuxMode mode);

/// Turn a decision into switch command times and the gate window (the final
/// bin of the cycle shifted by the pre-delay). Blocked cycles get no gate.
/// Throws config_error when the timing feasibility invariant is violated.
RoutingPlan schedule(const RoutingDecision& decision, const ControllerConfig& cfg,
                     const ChannelParams& ch, const TimeGrid& grid);

} // namespace muxsim
