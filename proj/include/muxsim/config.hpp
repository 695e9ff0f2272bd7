#pragma once

#include <string>

#include "muxsim/controller.hpp"
#include "muxsim/detector.hpp"
#include "muxsim/optics.hpp"
#include "muxsim/source.hpp"
#include "muxsim/time_grid.hpp"

namespace muxsim {

enum class RunMode { enabled, disabled, both };

/// Full experiment description. Parsed from a JSON document; every field has
/// a default, unknown keys are rejected with their path.
struct ExperimentConfig {
    TimeGrid grid;
    SourceParams source;
    ChannelParams channel;
    DetectorParams herald_detector;
    DetectorParams idler_detector;
    ControllerConfig controller;
    G2SplitterParams g2;
    std::uint64_t seed = 1;
    RunMode mode = RunMode::both;

    /// Cross-checks every invariant; throws config_error with the offending
    /// key. Called by parse_config and again before any cycle is simulated.
    void validate() const;

    /// Additional checks for the splitter geometry (delayed-window layout).
    void validate_g2() const;
};

ExperimentConfig default_config();

/// Parse a JSON config document. An empty document yields all defaults.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

/// Normalized JSON rendering of a config (defaults filled in, pump-power
/// calibration applied). Stable key order.
std::string config_to_json(const ExperimentConfig& cfg);

/// Set one numeric key addressed by a dotted path ("source.mu",
/// "channel.long_path_extra_loss_db", ...) and return the re-validated
/// config. Unknown paths raise config_error.
ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis,
                                 double value);

const char* run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);

} // namespace muxsim
