#pragma once

#include <cstdint>

namespace muxsim {

/// Counters accumulated over simulated cycles. Merging two tallies is
/// component-wise addition, so partitioned runs combine associatively and
/// commutatively into the same totals as one contiguous run.
struct Tally {
    std::uint64_t H = 0;         // heralding triggers (cycles with a deciding herald)
    std::uint64_t S = 0;         // raw signal-detector clicks
    std::uint64_t C = 0;         // gated clicks from the deciding herald's partner
    std::uint64_t A = 0;         // gated clicks from any other origin
    std::uint64_t A_shifted = 0; // accidental estimate from uncorrelated triggers
    std::uint64_t R12 = 0;       // trigger + click in the direct splitter window
    std::uint64_t R13 = 0;       // trigger + click in the delayed splitter window
    std::uint64_t C123 = 0;      // trigger + clicks in both splitter windows
    std::uint64_t W = 0;         // opened output gates
    double duration_s = 0.0;

    Tally& operator+=(const Tally& o) {
        H += o.H;
        S += o.S;
        C += o.C;
        A += o.A;
        A_shifted += o.A_shifted;
        R12 += o.R12;
        R13 += o.R13;
        C123 += o.C123;
        W += o.W;
        duration_s += o.duration_s;
        return *this;
    }

    friend Tally operator+(Tally a, const Tally& b) { return a += b; }

    friend bool operator==(const Tally& a, const Tally& b) {
        return a.H == b.H && a.S == b.S && a.C == b.C && a.A == b.A &&
               a.A_shifted == b.A_shifted && a.R12 == b.R12 && a.R13 == b.R13 &&
               a.C123 == b.C123 && a.W == b.W && a.duration_s == b.duration_s;
    }
};

inline Tally merge_tallies(const Tally& a, const Tally& b) { return a + b; }

} // namespace muxsim
