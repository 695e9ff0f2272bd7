#include "muxsim/source.hpp"

#include <cmath>

#include "muxsim/errors.hpp"

namespace muxsim {

void SourceParams::validate() const {
    if (!(effective_mu() >= 0.0)) {
        throw config_error("source.mu must be >= 0");
    }
    if (mode_count && *mode_count < 1) {
        throw config_error("source.mode_count must be >= 1 or \"infinite\"");
    }
    if (pump_power_mw && !(*pump_power_mw >= 0.0)) {
        throw config_error("source.pump_power_mw must be >= 0");
    }
    if (!(mu_per_mw >= 0.0)) {
        throw config_error("source.mu_per_mw must be >= 0");
    }
}

int sample_pairs_in_bin(const SourceParams& src, RandomStream& rng) {
    const double mu = src.effective_mu();
    if (mu < 0.0) {
        throw std::invalid_argument("sample_pairs_in_bin: mu must be >= 0");
    }
    if (mu == 0.0) return 0;
    if (!src.mode_count) {
        return rng.poisson(mu);
    }
    const int modes = *src.mode_count;
    const double per_mode = mu / modes;
    int n = 0;
    for (int m = 0; m < modes; ++m) {
        n += rng.thermal_mode(per_mode);
    }
    return n;
}

void generate_cycle(const SourceParams& src, const TimeGrid& grid, std::int64_t cycle,
                    RandomStream& rng, std::vector<PairEvent>& out) {
    // Pair ids embed the cycle index; 16 bits of sequence is far beyond any
    // realistic per-cycle pair count at mu << 1.
    std::uint64_t next_id = static_cast<std::uint64_t>(cycle) << 16;
    for (int bin = 0; bin < grid.bins_per_cycle; ++bin) {
        const int n = sample_pairs_in_bin(src, rng);
        for (int k = 0; k < n; ++k) {
            const double t = (bin + rng.uniform()) * grid.bin_width_ns;
            out.push_back(PairEvent{cycle, bin, next_id++, t});
        }
    }
}

} // namespace muxsim
