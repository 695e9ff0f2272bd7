#include "muxsim/analytic.hpp"

#include <bit>
#include <cmath>

#include "muxsim/errors.hpp"
#include "muxsim/optics.hpp"

namespace muxsim {

namespace {

constexpr double kNormalizationTolerance = 1e-10;

// Per-bin no-click probability E[(1-p)^n] under the truncated pmf.
double no_click_prob(const std::vector<double>& f, double p) {
    double acc = 0.0;
    double pow_term = 1.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        acc += f[n] * pow_term;
        pow_term *= 1.0 - p;
    }
    return acc;
}

// Conditional pmf of the pair number in a bin that produced a herald click.
std::vector<double> heralded_bin_pmf(const std::vector<double>& f, double p, double no_click) {
    std::vector<double> g(f.size(), 0.0);
    double pow_term = 1.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        g[n] = f[n] * (1.0 - pow_term) / (1.0 - no_click);
        pow_term *= 1.0 - p;
    }
    return g;
}

// P(the single recorded gated click is the deciding pair's photon | n pairs
// in the routed bin), for per-photon click probability s. The partner is
// exchangeable with the other n-1 photons, so it is the earliest of the
// clicking ones with probability 1/n.
double partner_click_prob(int n, double s) {
    return (1.0 - std::pow(1.0 - s, n)) / n;
}

} // namespace

std::vector<double> source_pmf(double mu, std::optional<int> mode_count, int cutoff) {
    if (mu < 0.0) throw std::invalid_argument("source_pmf: mu must be >= 0");
    if (cutoff < 1) throw std::invalid_argument("source_pmf: cutoff must be >= 1");
    std::vector<double> f(cutoff + 1, 0.0);
    if (!mode_count) {
        f[0] = std::exp(-mu);
        for (int n = 1; n <= cutoff; ++n) f[n] = f[n - 1] * mu / n;
    } else {
        const int modes = *mode_count;
        if (modes < 1) throw std::invalid_argument("source_pmf: mode_count must be >= 1");
        const double mean_per_mode = mu / modes;
        const double s = mean_per_mode / (1.0 + mean_per_mode);
        f[0] = std::pow(1.0 - s, modes);
        for (int n = 1; n <= cutoff; ++n) f[n] = f[n - 1] * s * (modes + n - 1.0) / n;
    }
    return f;
}

double OracleParams::path_transmission(int delay_bins) const {
    const int branches = std::popcount(static_cast<unsigned>(delay_bins));
    return base_transmission * db_to_transmission(switch_loss_db * n_switches) *
           db_to_transmission(extra_delay_loss_db * branches);
}

void OracleParams::validate() const {
    if (mu < 0.0) throw config_error("oracle: mu must be >= 0");
    if (stages < 1) throw config_error("oracle: stages must be >= 1");
    if (cutoff < 1) throw config_error("oracle: cutoff must be >= 1");
    if (herald_click_prob < 0.0 || herald_click_prob > 1.0 || idler_efficiency < 0.0 ||
        idler_efficiency > 1.0 || base_transmission < 0.0 || base_transmission > 1.0) {
        throw config_error("oracle: probabilities must lie in [0, 1]");
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw config_error("oracle: split_ratio must lie in (0, 1)");
    }

    const auto f = source_pmf(mu, mode_count, cutoff);
    double sum = 0.0;
    for (double v : f) sum += v;
    const double deficit = 1.0 - std::pow(sum, bins());
    if (deficit >= kNormalizationTolerance) {
        throw sim_error("oracle cutoff too small: truncated tail mass exceeds tolerance");
    }
}

OracleParams OracleParams::from_config(const ExperimentConfig& cfg) {
    if (cfg.herald_detector.dark_rate_hz > 0.0 || cfg.idler_detector.dark_rate_hz > 0.0) {
        throw sim_error("oracle requires dark-count-free detectors");
    }
    if (cfg.herald_detector.dead_time_ns > 0.0) {
        throw sim_error("oracle requires a dead-time-free herald detector");
    }
    OracleParams p;
    p.mu = cfg.source.effective_mu();
    p.mode_count = cfg.source.mode_count;
    p.herald_click_prob = cfg.channel.signal_transmission * cfg.herald_detector.efficiency;
    p.idler_efficiency = cfg.idler_detector.efficiency;
    p.base_transmission = cfg.channel.idler_base_transmission;
    p.switch_loss_db = cfg.channel.switch_insertion_loss_db;
    p.n_switches = cfg.channel.n_switches;
    p.extra_delay_loss_db = cfg.channel.long_path_extra_loss_db;
    p.stages = cfg.grid.stages();
    p.split_ratio = cfg.g2.split_ratio;
    return p;
}

double CycleTable::total() const {
    double sum = 0.0;
    for (double v : p) sum += v;
    return sum;
}

CycleTable exact_cycle_probabilities(const OracleParams& params, MuxMode mode) {
    params.validate();
    const int bins = params.bins();
    const int n_max = params.cutoff;
    const double states = std::pow(static_cast<double>(n_max + 1), bins);
    if (states > 2e6) {
        throw sim_error("exact_cycle_probabilities: state space too large; reduce stages or cutoff");
    }

    const auto f = source_pmf(params.mu, params.mode_count, n_max);
    const double p = params.herald_click_prob;

    // Binomial output pmf per (deciding bin, pair count).
    std::vector<std::vector<double>> binom(bins);
    for (int k = 0; k < bins; ++k) {
        const double t = params.path_transmission(bins - 1 - k);
        binom[k].assign((n_max + 1) * (n_max + 1), 0.0);
        for (int n = 0; n <= n_max; ++n) {
            for (int j = 0; j <= n; ++j) {
                double c = 1.0;
                for (int i = 0; i < j; ++i) c = c * (n - i) / (i + 1);
                binom[k][n * (n_max + 1) + j] =
                    c * std::pow(t, j) * std::pow(1.0 - t, n - j);
            }
        }
    }

    CycleTable table;
    table.bins = bins;
    table.cutoff = n_max;
    table.p.assign((std::size_t{1} << bins) * (n_max + 1), 0.0);

    std::vector<int> n(bins, 0);           // current photon-number vector
    std::vector<double> click(bins, 0.0);  // per-bin click probability given n
    while (true) {
        double prob_n = 1.0;
        for (int b = 0; b < bins; ++b) {
            prob_n *= f[n[b]];
            click[b] = 1.0 - std::pow(1.0 - p, n[b]);
        }
        if (prob_n > 0.0) {
            const unsigned n_patterns = 1u << bins;
            for (unsigned pattern = 0; pattern < n_patterns; ++pattern) {
                double prob_pat = prob_n;
                for (int b = 0; b < bins; ++b) {
                    prob_pat *= (pattern >> b) & 1u ? click[b] : 1.0 - click[b];
                }
                if (prob_pat == 0.0) continue;

                int deciding = -1;
                if (mode == MuxMode::enabled) {
                    if (pattern != 0) deciding = std::countr_zero(pattern);
                } else {
                    if ((pattern >> (bins - 1)) & 1u) deciding = bins - 1;
                }
                double* row = &table.p[pattern * (n_max + 1)];
                if (deciding < 0) {
                    row[0] += prob_pat;
                } else {
                    const double* bp = &binom[deciding][n[deciding] * (n_max + 1)];
                    for (int j = 0; j <= n[deciding]; ++j) row[j] += prob_pat * bp[j];
                }
            }
        }
        int b = 0;
        while (b < bins && ++n[b] > n_max) n[b++] = 0;
        if (b == bins) break;
    }
    return table;
}

OracleRates oracle_rates(const OracleParams& params, MuxMode mode) {
    params.validate();
    const int bins = params.bins();
    const int n_max = params.cutoff;
    const double p = params.herald_click_prob;
    const double eta = params.idler_efficiency;
    const double q = params.split_ratio;

    const auto f = source_pmf(params.mu, params.mode_count, n_max);
    const double no_click = no_click_prob(f, p);
    const auto g = heralded_bin_pmf(f, p, no_click);

    double mean_pairs = 0.0;
    for (int n = 0; n <= n_max; ++n) mean_pairs += n * f[n];

    OracleRates rates;
    rates.signal_clicks = bins * p * mean_pairs;

    auto add_branch = [&](int deciding_bin, double branch_prob) {
        const double t = params.path_transmission(bins - 1 - deciding_bin);
        const double s = t * eta;
        const double u = t * q * eta;
        const double v = t * (1.0 - q) * eta;
        double coin = 0.0, acc = 0.0, r12 = 0.0, r13 = 0.0, c123 = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            const double any_click = 1.0 - std::pow(1.0 - s, n);
            const double partner = partner_click_prob(n, s);
            coin += g[n] * partner;
            acc += g[n] * (any_click - partner);
            const double hit12 = 1.0 - std::pow(1.0 - u, n);
            const double hit13 = 1.0 - std::pow(1.0 - v, n);
            r12 += g[n] * hit12;
            r13 += g[n] * hit13;
            c123 += g[n] * (hit12 + hit13 - 1.0 + std::pow(1.0 - u - v, n));
        }
        rates.trigger += branch_prob;
        rates.coincidence += branch_prob * coin;
        rates.accidental += branch_prob * acc;
        rates.r12 += branch_prob * r12;
        rates.r13 += branch_prob * r13;
        rates.c123 += branch_prob * c123;
    };

    if (mode == MuxMode::enabled) {
        double blocked_before = 1.0;
        for (int k = 0; k < bins; ++k) {
            add_branch(k, blocked_before * (1.0 - no_click));
            blocked_before *= no_click;
        }
    } else {
        add_branch(bins - 1, 1.0 - no_click);
    }
    return rates;
}

double heralded_g2(const OracleParams& params, MuxMode mode) {
    params.validate();
    const int bins = params.bins();
    const int n_max = params.cutoff;
    const double p = params.herald_click_prob;

    const auto f = source_pmf(params.mu, params.mode_count, n_max);
    const double no_click = no_click_prob(f, p);
    const auto g = heralded_bin_pmf(f, p, no_click);

    double m1 = 0.0, m2 = 0.0; // factorial moments of the heralded bin
    for (int n = 0; n <= n_max; ++n) {
        m1 += g[n] * n;
        m2 += g[n] * n * (n - 1.0);
    }

    double mean = 0.0, pairs = 0.0; // over the routed mixture, thinning scales
    if (mode == MuxMode::enabled) { // factorial moments by t and t^2
        double blocked_before = 1.0;
        double norm = 0.0;
        for (int k = 0; k < bins; ++k) {
            const double w = blocked_before * (1.0 - no_click);
            const double t = params.path_transmission(bins - 1 - k);
            mean += w * t * m1;
            pairs += w * t * t * m2;
            norm += w;
            blocked_before *= no_click;
        }
        mean /= norm;
        pairs /= norm;
    } else {
        const double t = params.path_transmission(0);
        mean = t * m1;
        pairs = t * t * m2;
    }
    if (!(mean > 0.0)) {
        throw sim_error("heralded g2 undefined: mean output photon number is zero");
    }
    return pairs / (mean * mean);
}

double g2_of_distribution(const std::vector<double>& pmf) {
    double mean = 0.0, pairs = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) {
        mean += pmf[n] * static_cast<double>(n);
        pairs += pmf[n] * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
    }
    if (!(mean > 0.0)) {
        throw sim_error("g2 undefined: distribution has zero mean");
    }
    return pairs / (mean * mean);
}

double analytic_improvement_factor(const OracleParams& params) {
    if (params.stages != 1) {
        throw config_error("analytic_improvement_factor is defined for one stage");
    }
    const OracleRates enabled = oracle_rates(params, MuxMode::enabled);
    const OracleRates disabled = oracle_rates(params, MuxMode::disabled);
    if (!(disabled.coincidence > 0.0)) {
        throw sim_error("improvement factor undefined: zero disabled coincidence rate");
    }
    return enabled.coincidence / disabled.coincidence;
}

double improvement_factor_small_mu(const OracleParams& params) {
    return 1.0 + params.path_transmission(1) / params.path_transmission(0);
}

StageScan optimal_stage_count(double per_switch_loss_db, double mu, int m_max,
                              double herald_click_prob, int cutoff) {
    if (m_max < 1 || m_max > 6) {
        throw config_error("optimal_stage_count: m_max must lie in [1, 6]");
    }
    if (per_switch_loss_db < 0.0) {
        throw config_error("optimal_stage_count: per-switch loss must be >= 0");
    }

    const auto f = source_pmf(mu, std::nullopt, cutoff);
    const double no_click = no_click_prob(f, herald_click_prob);
    const auto g = heralded_bin_pmf(f, herald_click_prob, no_click);

    StageScan scan;
    for (int m = 1; m <= m_max; ++m) {
        const int bins = 1 << m;
        const double t = db_to_transmission(per_switch_loss_db * (m + 1));
        double single = 0.0;
        for (int n = 1; n <= cutoff; ++n) {
            single += g[n] * n * t * std::pow(1.0 - t, n - 1);
        }
        const double trigger = 1.0 - std::pow(no_click, bins);
        scan.p1.push_back(trigger * single);
    }
    scan.best_m = 1;
    for (int m = 2; m <= m_max; ++m) {
        if (scan.p1[m - 1] > scan.p1[scan.best_m - 1]) scan.best_m = m;
    }
    return scan;
}

} // namespace muxsim
