#pragma once

#include <optional>
#include <vector>

#include "muxsim/config.hpp"
#include "muxsim/controller.hpp"

namespace muxsim {

/// Inputs of the exact per-cycle calculation. Derived quantities follow the
/// same loss/routing law as the simulator, but are computed by enumerating
/// photon numbers up to the cutoff instead of sampling.
struct OracleParams {
    double mu = 0.02;
    std::optional<int> mode_count; // empty = Poisson
    double herald_click_prob = 0.4; // signal transmission x herald efficiency
    double idler_efficiency = 0.15;
    double base_transmission = 1.0;
    double switch_loss_db = 1.0;
    int n_switches = 2;
    double extra_delay_loss_db = 1.0;
    int stages = 1;
    int cutoff = 8; // max photons per bin
    double split_ratio = 0.5;

    int bins() const { return 1 << stages; }
    /// Output-path survival for a delay of delay_bins bins (detector excluded).
    double path_transmission(int delay_bins) const;
    void validate() const;

    /// Mirror of a simulator config; rejects configs the oracle cannot
    /// represent (dark counts, dead time).
    static OracleParams from_config(const ExperimentConfig& cfg);
};

/// Truncated pmf of the per-bin pair number (Poisson or M-mode thermal).
std::vector<double> source_pmf(double mu, std::optional<int> mode_count, int cutoff);

/// Exact joint distribution of (herald click pattern, output photon number)
/// for one cycle. Patterns are bitmasks over bins (bit b set = at least one
/// signal click in bin b); output photon numbers are counted after path
/// losses, before the detector.
struct CycleTable {
    int bins = 0;
    int cutoff = 0;
    std::vector<double> p; // [pattern * (cutoff + 1) + photons]

    double at(unsigned pattern, int photons) const { return p[pattern * (cutoff + 1) + photons]; }
    double total() const;
};

CycleTable exact_cycle_probabilities(const OracleParams& params, MuxMode mode);

/// Expected per-cycle rates, exact under the truncation.
struct OracleRates {
    double trigger = 0.0;       // cycles with a deciding herald
    double signal_clicks = 0.0; // expected raw herald clicks
    double coincidence = 0.0;   // gated click from the deciding pair
    double accidental = 0.0;    // gated click from any other pair
    double r12 = 0.0;           // splitter geometry: direct-window click
    double r13 = 0.0;           //                    delayed-window click
    double c123 = 0.0;          //                    both windows click
};

OracleRates oracle_rates(const OracleParams& params, MuxMode mode);

/// Heralded g2 of the output photon-number distribution (loss-invariant).
double heralded_g2(const OracleParams& params, MuxMode mode);

/// g2 of an arbitrary photon-number distribution (index = photon number).
double g2_of_distribution(const std::vector<double>& pmf);

/// Exact enabled/disabled coincidence-rate ratio for one correction stage.
double analytic_improvement_factor(const OracleParams& params);

/// Small-mu closed form of the same ratio: 1 + t_long / t_short.
double improvement_factor_small_mu(const OracleParams& params);

/// Heralded single-photon output probability per cycle for m = 1..m_max
/// stages, each using m + 1 switches of the given insertion loss, and the
/// stage count maximizing it (ties toward fewer stages).
struct StageScan {
    int best_m = 1;
    std::vector<double> p1; // index m - 1
};

StageScan optimal_stage_count(double per_switch_loss_db, double mu, int m_max,
                              double herald_click_prob = 1.0, int cutoff = 8);

} // namespace muxsim
