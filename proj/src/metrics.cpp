#include "muxsim/metrics.hpp"

#include <cmath>
#include <limits>

#include "muxsim/errors.hpp"

namespace muxsim {

double car(const Tally& t) {
    if (t.A == 0) {
        throw sim_error("CAR undefined: no accidentals recorded");
    }
    return static_cast<double>(t.C) / static_cast<double>(t.A);
}

double car_shifted(const Tally& t) {
    if (t.A_shifted == 0) {
        throw sim_error("shifted CAR undefined: no accidental-estimate counts");
    }
    return static_cast<double>(t.C + t.A) / static_cast<double>(t.A_shifted);
}

double improvement_factor(const Tally& enabled, const Tally& disabled) {
    if (disabled.C == 0) {
        throw sim_error("improvement factor undefined: disabled run has no coincidences");
    }
    if (!(enabled.duration_s > 0.0) || !(disabled.duration_s > 0.0)) {
        throw sim_error("improvement factor undefined: zero duration");
    }
    const double enabled_rate = static_cast<double>(enabled.C) / enabled.duration_s;
    const double disabled_rate = static_cast<double>(disabled.C) / disabled.duration_s;
    return enabled_rate / disabled_rate;
}

double g2_estimate(const Tally& t) {
    if (t.R12 == 0 || t.R13 == 0) {
        throw sim_error("g2 undefined: empty splitter-port coincidence counts");
    }
    return static_cast<double>(t.C123) * static_cast<double>(t.H) /
           (static_cast<double>(t.R12) * static_cast<double>(t.R13));
}

namespace {

Tally subtract(Tally total, const Tally& p) {
    total.H -= p.H;
    total.S -= p.S;
    total.C -= p.C;
    total.A -= p.A;
    total.A_shifted -= p.A_shifted;
    total.R12 -= p.R12;
    total.R13 -= p.R13;
    total.C123 -= p.C123;
    total.W -= p.W;
    total.duration_s -= p.duration_s;
    return total;
}

std::optional<Uncertain> jackknife_impl(std::size_t n,
                                        const std::function<double(std::size_t)>& leave_one_out,
                                        const std::function<double()>& full) {
    double value;
    try {
        value = full();
    } catch (const sim_error&) {
        return std::nullopt;
    }
    if (n < 2) {
        return Uncertain{value, 0.0};
    }
    std::vector<double> thetas;
    thetas.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        try {
            thetas.push_back(leave_one_out(i));
        } catch (const sim_error&) {
            // A partition whose removal makes the statistic undefined: no
            // usable error estimate at this sample size.
            return Uncertain{value, std::numeric_limits<double>::quiet_NaN()};
        }
    }
    double mean = 0.0;
    for (double th : thetas) mean += th;
    mean /= static_cast<double>(thetas.size());
    double ss = 0.0;
    for (double th : thetas) ss += (th - mean) * (th - mean);
    const double m = static_cast<double>(thetas.size());
    return Uncertain{value, std::sqrt((m - 1.0) / m * ss)};
}

} // namespace

std::optional<Uncertain> jackknife(const std::vector<Tally>& partitions,
                                   const std::function<double(const Tally&)>& stat) {
    Tally total;
    for (const Tally& p : partitions) total += p;
    return jackknife_impl(
        partitions.size(),
        [&](std::size_t i) { return stat(subtract(total, partitions[i])); },
        [&] { return stat(total); });
}

std::optional<Uncertain> jackknife_paired(
    const std::vector<Tally>& a, const std::vector<Tally>& b,
    const std::function<double(const Tally&, const Tally&)>& stat) {
    if (a.size() != b.size()) {
        throw sim_error("jackknife_paired: partition vectors must be aligned");
    }
    Tally ta, tb;
    for (const Tally& p : a) ta += p;
    for (const Tally& p : b) tb += p;
    return jackknife_impl(
        a.size(),
        [&](std::size_t i) { return stat(subtract(ta, a[i]), subtract(tb, b[i])); },
        [&] { return stat(ta, tb); });
}

MetricsReport build_report(const std::vector<Tally>& partitions, std::uint64_t cycles) {
    Tally total;
    for (const Tally& p : partitions) total += p;

    MetricsReport r;
    r.cycles = cycles;
    r.duration_s = total.duration_s;
    if (total.duration_s > 0.0) {
        r.signal_cps = static_cast<double>(total.S) / total.duration_s;
        r.brightness_cps = static_cast<double>(total.C) / total.duration_s;
    }
    r.car = jackknife(partitions, [](const Tally& t) { return car(t); });
    r.car_shifted = jackknife(partitions, [](const Tally& t) { return car_shifted(t); });
    if (total.R12 > 0 && total.R13 > 0) {
        r.g2 = jackknife(partitions, [](const Tally& t) { return g2_estimate(t); });
    }
    return r;
}

RatioReport build_ratio_report(const std::vector<Tally>& enabled,
                               const std::vector<Tally>& disabled) {
    RatioReport r;
    r.improvement_factor = jackknife_paired(
        enabled, disabled,
        [](const Tally& e, const Tally& d) { return improvement_factor(e, d); });
    Tally te, td;
    for (const Tally& p : enabled) te += p;
    for (const Tally& p : disabled) td += p;
    if (te.R12 > 0 && te.R13 > 0 && td.R12 > 0 && td.R13 > 0 && td.C123 > 0) {
        r.g2_ratio = jackknife_paired(enabled, disabled, [](const Tally& e, const Tally& d) {
            return g2_estimate(e) / g2_estimate(d);
        });
    }
    if (te.A > 0 && td.A > 0) {
        r.car_ratio = jackknife_paired(
            enabled, disabled, [](const Tally& e, const Tally& d) { return car(e) / car(d); });
    }
    return r;
}

} // namespace muxsim
