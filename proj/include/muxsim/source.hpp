#pragma once

#include <optional>
#include <vector>

#include "muxsim/events.hpp"
#include "muxsim/rng.hpp"
#include "muxsim/time_grid.hpp"

namespace muxsim {

/// CW-pumped SPDC pair statistics per time bin.
///
/// mode_count empty selects the many-mode (Poisson) limit; a finite M gives
/// the M-mode negative binomial, with M = 1 the Bose-Einstein / thermal
/// case. If pump_power_mw is set, mu = mu_per_mw * pump_power_mw.
struct SourceParams {
    double mu = 0.02; // mean pairs per bin
    std::optional<int> mode_count;
    std::optional<double> pump_power_mw;
    double mu_per_mw = 0.02;

    void validate() const;

    /// mu after applying the pump-power calibration, if any.
    double effective_mu() const {
        return pump_power_mw ? mu_per_mw * *pump_power_mw : mu;
    }
};

/// Number of pairs created in one bin.
int sample_pairs_in_bin(const SourceParams& src, RandomStream& rng);

/// Appends this cycle's pair events. Timestamps are cycle-relative and
/// uniform within their bin; pair ids are unique across the run.
void generate_cycle(const SourceParams& src, const TimeGrid& grid, std::int64_t cycle,
                    RandomStream& rng, std::vector<PairEvent>& out);

} // namespace muxsim
