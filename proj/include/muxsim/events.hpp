#pragma once

#include <cstdint>
#include <limits>

namespace muxsim {

/// One SPDC pair, tagged with a run-unique id so that coincidences and
/// accidentals can be classified against ground truth. t_ns is relative to
/// the start of the pair's cycle and lies inside its bin.
struct PairEvent {
    std::int64_t cycle = 0;
    int bin = 0;
    std::uint64_t pair_id = 0;
    double t_ns = 0.0;
};

enum class Channel { signal, idler_port2, idler_port3 };

/// A detector click. Dark clicks carry no pair id.
struct Detection {
    static constexpr std::uint64_t dark_origin = std::numeric_limits<std::uint64_t>::max();

    double t_ns = 0.0;
    std::uint64_t pair_id = dark_origin;
    Channel channel = Channel::signal;

    bool is_dark() const { return pair_id == dark_origin; }
};

} // namespace muxsim
