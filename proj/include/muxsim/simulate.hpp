#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "muxsim/config.hpp"
#include "muxsim/tally.hpp"

namespace muxsim {

/// direct: all routed idler photons meet one gated detector.
/// split: the output passes the g2 beamsplitter; the delayed port is read
/// out by the same detector in a second window (fills R12/R13/C123).
enum class Geometry { direct, split };

struct PartitionedRun {
    std::vector<Tally> partitions;
    Tally total;
};

/// Simulate n_cycles cycles of one mode. Cycles draw from per-cycle
/// substreams keyed by (seed, cycle, purpose), so the result is bit-identical
/// for any partition count and thread count; partitions exist for jackknife
/// errors and parallel execution. trace, when given, receives one line per
/// cycle (deterministic order).
PartitionedRun run_cycles(const ExperimentConfig& cfg, MuxMode mode, Geometry geometry,
                          std::int64_t n_cycles, int n_partitions = 32, int n_threads = 1,
                          std::string* trace = nullptr);

} // namespace muxsim
