#pragma once

#include <vector>

#include "muxsim/events.hpp"
#include "muxsim/rng.hpp"

namespace muxsim {

enum class DetectorMode { free_running, gated };

struct DetectorParams {
    double efficiency = 1.0;
    double dead_time_ns = 0.0;
    double dark_rate_hz = 0.0;
    DetectorMode mode = DetectorMode::free_running;
    double gate_offset_ns = 0.0; // gated only
    double gate_width_ns = 0.0;  // gated only, must be > 0

    void validate() const;
};

/// Photon arrival at a detector, before detection is decided.
struct Arrival {
    double t_ns = 0.0;
    std::uint64_t pair_id = Detection::dark_origin;
};

struct GateWindow {
    double start_ns = 0.0;
    double width_ns = 0.0;

    double end_ns() const { return start_ns + width_ns; }
    bool contains(double t) const { return t >= start_ns && t < end_ns(); }
};

/// Free-running detection over [0, span_ns): each arrival clicks with
/// probability efficiency, dark clicks arrive as a Poisson process of
/// dark_rate_hz, and every accepted click blinds the detector for
/// dead_time_ns. dead_carry_ns, when given, holds the remaining blind time
/// at the start of the span and is updated to the carry into the next span.
std::vector<Detection> detect_free_running(const std::vector<Arrival>& arrivals,
                                           const DetectorParams& p, double span_ns,
                                           Channel channel, RandomStream& rng,
                                           double* dead_carry_ns = nullptr);

/// Gated detection: only arrivals inside an open gate may click, a per-gate
/// dark click occurs with probability dark_rate_hz x gate width, and at most
/// one click per gate is recorded (first in time wins). Gates must be
/// time-sorted and non-overlapping.
std::vector<Detection> detect_gated(const std::vector<Arrival>& arrivals,
                                    const std::vector<GateWindow>& gates,
                                    const DetectorParams& p, Channel channel,
                                    RandomStream& rng);

} // namespace muxsim
