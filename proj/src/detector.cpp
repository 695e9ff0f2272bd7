#include "muxsim/detector.hpp"

#include <algorithm>
#include <cmath>

#include "muxsim/errors.hpp"

namespace muxsim {

void DetectorParams::validate() const {
    if (efficiency < 0.0 || efficiency > 1.0) {
        throw config_error("detector.efficiency must lie in [0, 1]");
    }
    if (dead_time_ns < 0.0) {
        throw config_error("detector.dead_time_ns must be >= 0");
    }
    if (dark_rate_hz < 0.0) {
        throw config_error("detector.dark_rate_hz must be >= 0");
    }
    if (mode == DetectorMode::gated && !(gate_width_ns > 0.0)) {
        throw config_error("detector.gate_width_ns must be > 0 in gated mode");
    }
}

std::vector<Detection> detect_free_running(const std::vector<Arrival>& arrivals,
                                           const DetectorParams& p, double span_ns,
                                           Channel channel, RandomStream& rng,
                                           double* dead_carry_ns) {
    std::vector<Detection> candidates;
    candidates.reserve(arrivals.size());
    for (const Arrival& a : arrivals) {
        if (rng.bernoulli(p.efficiency)) {
            candidates.push_back(Detection{a.t_ns, a.pair_id, channel});
        }
    }
    if (p.dark_rate_hz > 0.0 && span_ns > 0.0) {
        const int n_dark = rng.poisson(p.dark_rate_hz * span_ns * 1e-9);
        for (int k = 0; k < n_dark; ++k) {
            candidates.push_back(Detection{rng.uniform(0.0, span_ns), Detection::dark_origin, channel});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Detection& a, const Detection& b) { return a.t_ns < b.t_ns; });

    std::vector<Detection> clicks;
    clicks.reserve(candidates.size());
    double dead_until = dead_carry_ns ? *dead_carry_ns : -1.0;
    for (const Detection& c : candidates) {
        if (c.t_ns < dead_until) continue;
        clicks.push_back(c);
        if (p.dead_time_ns > 0.0) {
            dead_until = c.t_ns + p.dead_time_ns;
        }
    }
    if (dead_carry_ns) {
        *dead_carry_ns = dead_until - span_ns; // blind time left for the next span
    }
    return clicks;
}

std::vector<Detection> detect_gated(const std::vector<Arrival>& arrivals,
                                    const std::vector<GateWindow>& gates,
                                    const DetectorParams& p, Channel channel,
                                    RandomStream& rng) {
    for (std::size_t i = 0; i + 1 < gates.size(); ++i) {
        if (gates[i + 1].start_ns < gates[i].end_ns()) {
            throw config_error("detect_gated: gates must be sorted and non-overlapping");
        }
    }

    std::vector<Detection> clicks;
    for (const GateWindow& gate : gates) {
        bool have = false;
        Detection best{};
        for (const Arrival& a : arrivals) {
            if (!gate.contains(a.t_ns)) continue;
            if (!rng.bernoulli(p.efficiency)) continue;
            if (!have || a.t_ns < best.t_ns) {
                best = Detection{a.t_ns, a.pair_id, channel};
                have = true;
            }
        }
        if (p.dark_rate_hz > 0.0) {
            // Linearized per-gate dark probability; exact for rate x width << 1.
            const double p_dark = std::min(1.0, p.dark_rate_hz * gate.width_ns * 1e-9);
            if (rng.bernoulli(p_dark)) {
                const double t = rng.uniform(gate.start_ns, gate.end_ns());
                if (!have || t < best.t_ns) {
                    best = Detection{t, Detection::dark_origin, channel};
                    have = true;
                }
            }
        }
        if (have) clicks.push_back(best);
    }
    return clicks;
}

} // namespace muxsim
