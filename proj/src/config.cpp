#include "muxsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "muxsim/errors.hpp"

namespace muxsim {

namespace {

using nlohmann::ordered_json;

void require_object(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) {
        throw config_error(path + " must be an object");
    }
}

void reject_unknown_keys(const ordered_json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw config_error("unknown config key: " + path + it.key());
        }
    }
}

double get_number(const ordered_json& j, const std::string& path) {
    if (!j.is_number()) {
        throw config_error(path + " must be a number");
    }
    return j.get<double>();
}

int get_int(const ordered_json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        throw config_error(path + " must be an integer");
    }
    return j.get<int>();
}

void parse_grid(const ordered_json& j, TimeGrid& grid) {
    require_object(j, "grid");
    reject_unknown_keys(j, "grid.", {"bin_width_ns", "bins_per_cycle"});
    if (j.contains("bin_width_ns")) grid.bin_width_ns = get_number(j["bin_width_ns"], "grid.bin_width_ns");
    if (j.contains("bins_per_cycle")) grid.bins_per_cycle = get_int(j["bins_per_cycle"], "grid.bins_per_cycle");
}

void parse_source(const ordered_json& j, SourceParams& src) {
    require_object(j, "source");
    reject_unknown_keys(j, "source.", {"mu", "mode_count", "pump_power_mw", "mu_per_mw"});
    if (j.contains("mu") && j.contains("pump_power_mw")) {
        throw config_error("source: specify either mu or pump_power_mw, not both");
    }
    if (j.contains("mu")) src.mu = get_number(j["mu"], "source.mu");
    if (j.contains("pump_power_mw")) {
        src.pump_power_mw = get_number(j["pump_power_mw"], "source.pump_power_mw");
    }
    if (j.contains("mu_per_mw")) src.mu_per_mw = get_number(j["mu_per_mw"], "source.mu_per_mw");
    if (j.contains("mode_count")) {
        const auto& mc = j["mode_count"];
        if (mc.is_string() && mc.get<std::string>() == "infinite") {
            src.mode_count.reset();
        } else {
            src.mode_count = get_int(mc, "source.mode_count");
        }
    }
}

void parse_channel(const ordered_json& j, ChannelParams& ch, bool& n_switches_given) {
    require_object(j, "channel");
    reject_unknown_keys(j, "channel.",
                        {"signal_transmission", "idler_base_transmission",
                         "switch_insertion_loss_db", "n_switches", "long_path_extra_loss_db",
                         "predelay_ns", "long_path_delay_ns"});
    if (j.contains("signal_transmission"))
        ch.signal_transmission = get_number(j["signal_transmission"], "channel.signal_transmission");
    if (j.contains("idler_base_transmission"))
        ch.idler_base_transmission =
            get_number(j["idler_base_transmission"], "channel.idler_base_transmission");
    if (j.contains("switch_insertion_loss_db"))
        ch.switch_insertion_loss_db =
            get_number(j["switch_insertion_loss_db"], "channel.switch_insertion_loss_db");
    if (j.contains("n_switches")) {
        ch.n_switches = get_int(j["n_switches"], "channel.n_switches");
        n_switches_given = true;
    }
    if (j.contains("long_path_extra_loss_db"))
        ch.long_path_extra_loss_db =
            get_number(j["long_path_extra_loss_db"], "channel.long_path_extra_loss_db");
    if (j.contains("predelay_ns")) ch.predelay_ns = get_number(j["predelay_ns"], "channel.predelay_ns");
    if (j.contains("long_path_delay_ns"))
        ch.long_path_delay_ns = get_number(j["long_path_delay_ns"], "channel.long_path_delay_ns");
}

void parse_detector(const ordered_json& j, const std::string& path, DetectorParams& det,
                    bool& gate_width_given) {
    require_object(j, path);
    reject_unknown_keys(j, path + ".",
                        {"efficiency", "dead_time_ns", "dark_rate_hz", "mode", "gate_offset_ns",
                         "gate_width_ns"});
    if (j.contains("efficiency")) det.efficiency = get_number(j["efficiency"], path + ".efficiency");
    if (j.contains("dead_time_ns")) det.dead_time_ns = get_number(j["dead_time_ns"], path + ".dead_time_ns");
    if (j.contains("dark_rate_hz")) det.dark_rate_hz = get_number(j["dark_rate_hz"], path + ".dark_rate_hz");
    if (j.contains("mode")) {
        const std::string m = j["mode"].is_string() ? j["mode"].get<std::string>() : std::string();
        if (m == "free_running") {
            det.mode = DetectorMode::free_running;
        } else if (m == "gated") {
            det.mode = DetectorMode::gated;
        } else {
            throw config_error(path + ".mode must be \"free_running\" or \"gated\"");
        }
    }
    if (j.contains("gate_offset_ns")) det.gate_offset_ns = get_number(j["gate_offset_ns"], path + ".gate_offset_ns");
    if (j.contains("gate_width_ns")) {
        det.gate_width_ns = get_number(j["gate_width_ns"], path + ".gate_width_ns");
        gate_width_given = true;
    }
}

void parse_controller(const ordered_json& j, ControllerConfig& c) {
    require_object(j, "controller");
    reject_unknown_keys(j, "controller.", {"decision_latency_ns", "switch_settle_ns"});
    if (j.contains("decision_latency_ns"))
        c.decision_latency_ns = get_number(j["decision_latency_ns"], "controller.decision_latency_ns");
    if (j.contains("switch_settle_ns"))
        c.switch_settle_ns = get_number(j["switch_settle_ns"], "controller.switch_settle_ns");
}

void parse_g2(const ordered_json& j, G2SplitterParams& g) {
    require_object(j, "g2");
    reject_unknown_keys(j, "g2.", {"split_ratio", "arm_delay_ns"});
    if (j.contains("split_ratio")) g.split_ratio = get_number(j["split_ratio"], "g2.split_ratio");
    if (j.contains("arm_delay_ns")) g.arm_delay_ns = get_number(j["arm_delay_ns"], "g2.arm_delay_ns");
}

} // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.herald_detector.efficiency = 0.4;
    cfg.herald_detector.mode = DetectorMode::free_running;
    cfg.idler_detector.efficiency = 0.15;
    cfg.idler_detector.mode = DetectorMode::gated;
    cfg.idler_detector.gate_width_ns = cfg.grid.bin_width_ns;
    return cfg;
}

void ExperimentConfig::validate() const {
    grid.validate();
    source.validate();
    channel.validate(grid);
    herald_detector.validate();
    idler_detector.validate();
    controller.validate(channel);
    if (herald_detector.mode != DetectorMode::free_running) {
        throw config_error("herald_detector.mode must be free_running");
    }
    if (idler_detector.mode != DetectorMode::gated) {
        throw config_error("idler_detector.mode must be gated");
    }
}

void ExperimentConfig::validate_g2() const {
    g2.validate(grid);
}

ExperimentConfig parse_config(const std::string& text) {
    std::string trimmed = text;
    const auto first = trimmed.find_first_not_of(" \t\r\n");
    trimmed = first == std::string::npos ? std::string("{}") : trimmed.substr(first);

    ordered_json doc;
    try {
        doc = ordered_json::parse(trimmed);
    } catch (const std::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    require_object(doc, "config");
    reject_unknown_keys(doc, "",
                        {"grid", "source", "channel", "herald_detector", "idler_detector",
                         "controller", "g2", "seed", "mode"});

    ExperimentConfig cfg = default_config();
    bool n_switches_given = false;
    bool herald_gate_width_given = false;
    bool idler_gate_width_given = false;

    if (doc.contains("grid")) parse_grid(doc["grid"], cfg.grid);
    if (doc.contains("source")) parse_source(doc["source"], cfg.source);
    if (doc.contains("channel")) parse_channel(doc["channel"], cfg.channel, n_switches_given);
    if (doc.contains("herald_detector"))
        parse_detector(doc["herald_detector"], "herald_detector", cfg.herald_detector,
                       herald_gate_width_given);
    if (doc.contains("idler_detector"))
        parse_detector(doc["idler_detector"], "idler_detector", cfg.idler_detector,
                       idler_gate_width_given);
    if (doc.contains("controller")) parse_controller(doc["controller"], cfg.controller);
    if (doc.contains("g2")) parse_g2(doc["g2"], cfg.g2);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw config_error("seed must be an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw config_error("mode must be a string");
        cfg.mode = run_mode_from_name(doc["mode"].get<std::string>());
    }

    cfg.grid.validate(); // needed before deriving grid-dependent defaults
    if (!n_switches_given) {
        cfg.channel.n_switches = cfg.grid.stages() + 1;
    }
    if (!idler_gate_width_given) {
        cfg.idler_detector.gate_width_ns = cfg.grid.bin_width_ns;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["grid"] = {{"bin_width_ns", cfg.grid.bin_width_ns},
                 {"bins_per_cycle", cfg.grid.bins_per_cycle}};
    ordered_json src;
    src["mu"] = cfg.source.effective_mu();
    src["mode_count"] =
        cfg.source.mode_count ? ordered_json(*cfg.source.mode_count) : ordered_json("infinite");
    if (cfg.source.pump_power_mw) src["pump_power_mw"] = *cfg.source.pump_power_mw;
    src["mu_per_mw"] = cfg.source.mu_per_mw;
    j["source"] = src;
    j["channel"] = {{"signal_transmission", cfg.channel.signal_transmission},
                    {"idler_base_transmission", cfg.channel.idler_base_transmission},
                    {"switch_insertion_loss_db", cfg.channel.switch_insertion_loss_db},
                    {"n_switches", cfg.channel.n_switches},
                    {"long_path_extra_loss_db", cfg.channel.long_path_extra_loss_db},
                    {"predelay_ns", cfg.channel.predelay_ns},
                    {"long_path_delay_ns", cfg.channel.long_path_delay_ns}};
    auto det = [](const DetectorParams& d) {
        ordered_json out = {{"efficiency", d.efficiency},
                            {"dead_time_ns", d.dead_time_ns},
                            {"dark_rate_hz", d.dark_rate_hz},
                            {"mode", d.mode == DetectorMode::gated ? "gated" : "free_running"}};
        if (d.mode == DetectorMode::gated) {
            out["gate_offset_ns"] = d.gate_offset_ns;
            out["gate_width_ns"] = d.gate_width_ns;
        }
        return out;
    };
    j["herald_detector"] = det(cfg.herald_detector);
    j["idler_detector"] = det(cfg.idler_detector);
    j["controller"] = {{"decision_latency_ns", cfg.controller.decision_latency_ns},
                       {"switch_settle_ns", cfg.controller.switch_settle_ns}};
    j["g2"] = {{"split_ratio", cfg.g2.split_ratio}, {"arm_delay_ns", cfg.g2.arm_delay_ns}};
    j["seed"] = cfg.seed;
    j["mode"] = run_mode_name(cfg.mode);
    return j.dump(2) + "\n";
}

ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis,
                                 double value) {
    ExperimentConfig out = cfg;
    if (axis == "source.mu") {
        out.source.mu = value;
        out.source.pump_power_mw.reset();
    } else if (axis == "source.pump_power_mw") {
        out.source.pump_power_mw = value;
    } else if (axis == "source.mu_per_mw") {
        out.source.mu_per_mw = value;
    } else if (axis == "grid.bin_width_ns") {
        out.grid.bin_width_ns = value;
        out.channel.long_path_delay_ns = value;
        out.idler_detector.gate_width_ns = value;
    } else if (axis == "channel.signal_transmission") {
        out.channel.signal_transmission = value;
    } else if (axis == "channel.idler_base_transmission") {
        out.channel.idler_base_transmission = value;
    } else if (axis == "channel.switch_insertion_loss_db") {
        out.channel.switch_insertion_loss_db = value;
    } else if (axis == "channel.long_path_extra_loss_db") {
        out.channel.long_path_extra_loss_db = value;
    } else if (axis == "channel.predelay_ns") {
        out.channel.predelay_ns = value;
    } else if (axis == "herald_detector.efficiency") {
        out.herald_detector.efficiency = value;
    } else if (axis == "herald_detector.dead_time_ns") {
        out.herald_detector.dead_time_ns = value;
    } else if (axis == "herald_detector.dark_rate_hz") {
        out.herald_detector.dark_rate_hz = value;
    } else if (axis == "idler_detector.efficiency") {
        out.idler_detector.efficiency = value;
    } else if (axis == "idler_detector.dark_rate_hz") {
        out.idler_detector.dark_rate_hz = value;
    } else if (axis == "controller.decision_latency_ns") {
        out.controller.decision_latency_ns = value;
    } else if (axis == "controller.switch_settle_ns") {
        out.controller.switch_settle_ns = value;
    } else if (axis == "g2.split_ratio") {
        out.g2.split_ratio = value;
    } else if (axis == "g2.arm_delay_ns") {
        out.g2.arm_delay_ns = value;
    } else {
        throw config_error("unknown sweep axis: " + axis);
    }
    out.validate();
    return out;
}

const char* run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::enabled: return "enabled";
        case RunMode::disabled: return "disabled";
        default: return "both";
    }
}

RunMode run_mode_from_name(const std::string& name) {
    if (name == "enabled") return RunMode::enabled;
    if (name == "disabled") return RunMode::disabled;
    if (name == "both") return RunMode::both;
    throw config_error("mode must be one of enabled|disabled|both");
}

} // namespace muxsim
