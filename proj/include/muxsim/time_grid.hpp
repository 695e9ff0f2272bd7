#pragma once

#include <cmath>
#include <cstdint>

#include "muxsim/errors.hpp"

namespace muxsim {

/// Discretization of the experiment: cycles of 2^m equal time bins.
/// All gating and binning uses right-open intervals [start, start + width).
struct TimeGrid {
    double bin_width_ns = 100.0;
    int bins_per_cycle = 2; // 2^m for m correction stages
    std::int64_t n_cycles = 1;

    double cycle_period_ns() const { return bin_width_ns * bins_per_cycle; }

    /// Correction stage count m with bins_per_cycle = 2^m.
    int stages() const {
        int m = 0;
        for (int b = bins_per_cycle; b > 1; b >>= 1) ++m;
        return m;
    }

    void validate() const {
        if (!(bin_width_ns > 0.0)) {
            throw config_error("grid.bin_width_ns must be > 0");
        }
        if (bins_per_cycle < 2 || (bins_per_cycle & (bins_per_cycle - 1)) != 0) {
            throw config_error("grid.bins_per_cycle must be a power of two >= 2");
        }
        if (n_cycles < 1) {
            throw config_error("grid.n_cycles must be >= 1");
        }
    }
};

struct BinRef {
    std::int64_t cycle;
    int bin;
};

/// Locate an absolute timestamp on the grid (right-open bins).
inline BinRef bin_of(double t_ns, const TimeGrid& grid) {
    const double period = grid.cycle_period_ns();
    const auto cycle = static_cast<std::int64_t>(std::floor(t_ns / period));
    const double local = t_ns - static_cast<double>(cycle) * period;
    int bin = static_cast<int>(std::floor(local / grid.bin_width_ns));
    if (bin < 0) bin = 0;
    if (bin >= grid.bins_per_cycle) bin = grid.bins_per_cycle - 1;
    return {cycle, bin};
}

} // namespace muxsim
