#include "muxsim/simulate.hpp"

#include <atomic>
#include <cstdio>
#include <thread>

#include "muxsim/controller.hpp"
#include "muxsim/detector.hpp"
#include "muxsim/errors.hpp"
#include "muxsim/metrics.hpp"
#include "muxsim/optics.hpp"
#include "muxsim/rng.hpp"
#include "muxsim/source.hpp"

namespace muxsim {

namespace {

// Substream purposes. A cycle's draws for one purpose never depend on any
// other purpose or cycle, so conditional fast paths keep the run bit-stable.
enum Purpose : unsigned {
    kPairGen = 0,
    kSignalThin = 1,
    kHeraldDetect = 2,
    kRoute = 3,
    kGateDetect = 4,
    kSplit = 5,
    kDecoyPairGen = 6,
    kDecoySignalThin = 7,
    kDecoyHeraldDetect = 8,
    kDecoyRoute = 9,
    kDecoyGateDetect = 10,
};

struct CycleWorkspace {
    std::vector<PairEvent> pairs;
    std::vector<PairEvent> decoy_pairs;
    std::vector<Arrival> signal_arrivals;
    std::vector<Arrival> gate_arrivals;
    std::vector<Detection> herald_clicks;
    std::vector<Detection> decoy_clicks;
};

void signal_arm(const std::vector<PairEvent>& pairs, const ExperimentConfig& cfg,
                std::int64_t cycle, unsigned thin_purpose, unsigned detect_purpose,
                CycleWorkspace& ws, double* dead_carry,
                std::vector<Detection>& clicks_out) {
    ws.signal_arrivals.clear();
    if (!pairs.empty()) {
        RandomStream thin = RandomStream::for_cycle(cfg.seed, cycle, thin_purpose);
        for (const PairEvent& ev : pairs) {
            if (thin.bernoulli(cfg.channel.signal_transmission)) {
                ws.signal_arrivals.push_back(Arrival{ev.t_ns, ev.pair_id});
            }
        }
    }
    clicks_out.clear();
    if (!ws.signal_arrivals.empty() || cfg.herald_detector.dark_rate_hz > 0.0) {
        RandomStream det = RandomStream::for_cycle(cfg.seed, cycle, detect_purpose);
        clicks_out = detect_free_running(ws.signal_arrivals, cfg.herald_detector,
                                         cfg.grid.cycle_period_ns(), Channel::signal, det,
                                         dead_carry);
    } else if (dead_carry) {
        *dead_carry -= cfg.grid.cycle_period_ns();
    }
}

void append_trace(std::string& trace, std::int64_t cycle, const RoutingDecision& decision,
                  const RoutingPlan& plan, const TimeGrid& grid) {
    char buf[160];
    if (!plan.open) {
        std::snprintf(buf, sizeof buf, "cycle=%lld decision=blocked herald_ns=- cmd_ns=- gate_ns=-\n",
                      static_cast<long long>(cycle));
    } else if (plan.commanded) {
        std::snprintf(buf, sizeof buf,
                      "cycle=%lld decision=%s herald_ns=%.4f cmd_ns=%.4f gate_ns=[%.4f,%.4f)\n",
                      static_cast<long long>(cycle), decision_label(decision, grid).c_str(),
                      plan.herald_t_ns, plan.command_t_ns, plan.gate_start_ns,
                      plan.gate_start_ns + plan.gate_width_ns);
    } else {
        std::snprintf(buf, sizeof buf,
                      "cycle=%lld decision=%s herald_ns=%.4f cmd_ns=- gate_ns=[%.4f,%.4f)\n",
                      static_cast<long long>(cycle), decision_label(decision, grid).c_str(),
                      plan.herald_t_ns, plan.gate_start_ns,
                      plan.gate_start_ns + plan.gate_width_ns);
    }
    trace += buf;
}

void simulate_cycle(const ExperimentConfig& cfg, MuxMode mode, Geometry geometry,
                    std::int64_t cycle, CycleWorkspace& ws, double* herald_dead_carry,
                    Tally& tally, std::string* trace) {
    const TimeGrid& grid = cfg.grid;

    ws.pairs.clear();
    {
        RandomStream pair_rng = RandomStream::for_cycle(cfg.seed, cycle, kPairGen);
        generate_cycle(cfg.source, grid, cycle, pair_rng, ws.pairs);
    }

    // Fast path: nothing can click in a cycle without photons or dark counts.
    const bool dark_possible =
        cfg.herald_detector.dark_rate_hz > 0.0 || cfg.idler_detector.dark_rate_hz > 0.0;
    if (ws.pairs.empty() && !dark_possible) {
        if (herald_dead_carry) *herald_dead_carry -= grid.cycle_period_ns();
        if (trace) {
            append_trace(*trace, cycle, RoutingDecision::blocked(), RoutingPlan{}, grid);
        }
        return;
    }

    signal_arm(ws.pairs, cfg, cycle, kSignalThin, kHeraldDetect, ws, herald_dead_carry,
               ws.herald_clicks);
    tally.S += ws.herald_clicks.size();

    const RoutingDecision decision = decide(ws.herald_clicks, grid, mode);
    const RoutingPlan plan = schedule(decision, cfg.controller, cfg.channel, grid);
    if (trace) append_trace(*trace, cycle, decision, plan, grid);

    if (plan.open) {
        tally.H += 1;
        tally.W += 1;

        RandomStream route_rng = RandomStream::for_cycle(cfg.seed, cycle, kRoute);
        const std::vector<PairEvent> routed =
            route_idler(ws.pairs, plan, cfg.channel, grid, route_rng);
        const GateWindow gate{plan.gate_start_ns, plan.gate_width_ns};

        if (geometry == Geometry::direct) {
            ws.gate_arrivals.clear();
            for (const PairEvent& ev : routed) ws.gate_arrivals.push_back(Arrival{ev.t_ns, ev.pair_id});
            RandomStream det_rng = RandomStream::for_cycle(cfg.seed, cycle, kGateDetect);
            const auto clicks = detect_gated(ws.gate_arrivals, {gate}, cfg.idler_detector,
                                             Channel::idler_port2, det_rng);
            if (!clicks.empty()) {
                if (classify_gated_click(clicks.front(), plan)) {
                    tally.C += 1;
                } else {
                    tally.A += 1;
                }
            }
        } else {
            RandomStream split_rng = RandomStream::for_cycle(cfg.seed, cycle, kSplit);
            const auto ports = split_for_g2(routed, cfg.g2, split_rng);
            const GateWindow delayed_gate{gate.start_ns + cfg.g2.arm_delay_ns, gate.width_ns};

            RandomStream det_rng = RandomStream::for_cycle(cfg.seed, cycle, kGateDetect);
            ws.gate_arrivals.clear();
            for (const PairEvent& ev : ports.first) ws.gate_arrivals.push_back(Arrival{ev.t_ns, ev.pair_id});
            const auto direct_clicks = detect_gated(ws.gate_arrivals, {gate}, cfg.idler_detector,
                                                    Channel::idler_port2, det_rng);
            ws.gate_arrivals.clear();
            for (const PairEvent& ev : ports.second) ws.gate_arrivals.push_back(Arrival{ev.t_ns, ev.pair_id});
            const auto delayed_clicks = detect_gated(ws.gate_arrivals, {delayed_gate},
                                                     cfg.idler_detector, Channel::idler_port3,
                                                     det_rng);

            const bool direct_hit = !direct_clicks.empty();
            const bool delayed_hit = !delayed_clicks.empty();
            tally.R12 += direct_hit ? 1 : 0;
            tally.R13 += delayed_hit ? 1 : 0;
            tally.C123 += (direct_hit && delayed_hit) ? 1 : 0;
            if (direct_hit) {
                if (classify_gated_click(direct_clicks.front(), plan)) {
                    tally.C += 1;
                } else {
                    tally.A += 1;
                }
            }
        }
    }

    // Accidental estimate: trigger drawn from an independent herald pattern
    // (statistically a different cycle's heralds) applied to this cycle's
    // photons. Every resulting click is uncorrelated by construction.
    if (geometry == Geometry::direct &&
        (!ws.pairs.empty() || cfg.idler_detector.dark_rate_hz > 0.0)) {
        ws.decoy_pairs.clear();
        {
            RandomStream decoy_pair_rng = RandomStream::for_cycle(cfg.seed, cycle, kDecoyPairGen);
            generate_cycle(cfg.source, grid, cycle, decoy_pair_rng, ws.decoy_pairs);
        }
        if (!ws.decoy_pairs.empty() || cfg.herald_detector.dark_rate_hz > 0.0) {
            signal_arm(ws.decoy_pairs, cfg, cycle, kDecoySignalThin, kDecoyHeraldDetect, ws,
                       nullptr, ws.decoy_clicks);
        } else {
            ws.decoy_clicks.clear();
        }
        const RoutingDecision decoy_decision = decide(ws.decoy_clicks, grid, mode);
        const RoutingPlan decoy_plan = schedule(decoy_decision, cfg.controller, cfg.channel, grid);
        if (decoy_plan.open) {
            RandomStream route_rng = RandomStream::for_cycle(cfg.seed, cycle, kDecoyRoute);
            const std::vector<PairEvent> routed =
                route_idler(ws.pairs, decoy_plan, cfg.channel, grid, route_rng);
            ws.gate_arrivals.clear();
            for (const PairEvent& ev : routed) ws.gate_arrivals.push_back(Arrival{ev.t_ns, ev.pair_id});
            RandomStream det_rng = RandomStream::for_cycle(cfg.seed, cycle, kDecoyGateDetect);
            const auto clicks =
                detect_gated(ws.gate_arrivals, {GateWindow{decoy_plan.gate_start_ns, decoy_plan.gate_width_ns}},
                             cfg.idler_detector, Channel::idler_port2, det_rng);
            tally.A_shifted += clicks.empty() ? 0 : 1;
        }
    }
}

} // namespace

PartitionedRun run_cycles(const ExperimentConfig& cfg, MuxMode mode, Geometry geometry,
                          std::int64_t n_cycles, int n_partitions, int n_threads,
                          std::string* trace) {
    cfg.validate();
    if (geometry == Geometry::split) cfg.validate_g2();
    if (n_cycles < 0) throw config_error("n_cycles must be >= 0");
    if (n_partitions < 1) n_partitions = 1;
    if (n_partitions > n_cycles && n_cycles > 0) n_partitions = static_cast<int>(n_cycles);
    if (n_threads < 1) n_threads = 1;

    const int parts = n_cycles == 0 ? 0 : n_partitions;
    std::vector<Tally> partition_tallies(parts);
    std::vector<std::string> partition_traces(trace ? parts : 0);

    auto run_partition = [&](int p) {
        const std::int64_t begin = n_cycles * p / parts;
        const std::int64_t end = n_cycles * (p + 1) / parts;
        CycleWorkspace ws;
        Tally t;
        double dead_carry = -1.0; // partition boundaries are dead-time free
        std::string* part_trace = trace ? &partition_traces[p] : nullptr;
        const bool track_dead = cfg.herald_detector.dead_time_ns > 0.0;
        for (std::int64_t c = begin; c < end; ++c) {
            simulate_cycle(cfg, mode, geometry, c, ws, track_dead ? &dead_carry : nullptr, t,
                           part_trace);
        }
        t.duration_s = static_cast<double>(end - begin) * cfg.grid.cycle_period_ns() * 1e-9;
        partition_tallies[p] = t;
    };

    if (n_threads == 1 || parts <= 1) {
        for (int p = 0; p < parts; ++p) run_partition(p);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min(n_threads, parts);
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int p = next.fetch_add(1); p < parts; p = next.fetch_add(1)) {
                    run_partition(p);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    PartitionedRun result;
    result.partitions = std::move(partition_tallies);
    for (const Tally& t : result.partitions) result.total += t;
    if (trace) {
        for (const std::string& s : partition_traces) *trace += s;
    }
    return result;
}

} // namespace muxsim
