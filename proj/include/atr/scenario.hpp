#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "atr/detection.hpp"
#include "atr/ris_optimizer.hpp"
#include "atr/scene_builder.hpp"

namespace atr {

/// Bandwidth list entry meaning "the whole grid span".
inline constexpr double kFullBand = std::numeric_limits<double>::infinity();

struct DetectionSettings {
    double in_band_fc_hz = 5.0e9;
    double out_of_band_fc_hz = 5.85e9;
    std::vector<double> bandwidths_hz{20e6, 40e6, 80e6, 160e6, 320e6, 640e6, kFullBand};
    std::vector<double> center_frequencies_hz{4.6e9, 5.0e9, 5.4e9};
    /// (fc, bw) pairs for which the bandwidth sweep writes a per-hole map.
    std::vector<std::pair<double, double>> map_pairs{{5.0e9, 20e6}, {5.0e9, kFullBand}};
    std::string metric = "auto";  // auto | mnd | euclidean
    std::size_t random_configs = 20;
    std::size_t calibration_snapshots = 10;
    double calibration_t_step_s = 0.0123;
    double calibration_margin = 1.0;
    double snr_db = 40.0;
    std::vector<double> depths_m{0.020};
    double trial_t_start_s = 1.0;
    double trial_t_step_s = 0.0071;
};

struct RisStudySettings {
    std::vector<double> center_frequencies_hz{4.8e9, 5.0e9, 5.2e9};
    double bandwidth_hz = 20e6;
};

struct VarianceSettings {
    std::size_t configs = 100;
};

struct AttackSettings {
    std::vector<std::string> strategies{"exact-config", "random-guess", "average-imprint"};
    std::size_t pool_size = 50;
    double replica_perturbation = 0.0;
    std::vector<double> bandwidths_hz{20e6, 40e6, 80e6, 160e6, 320e6};
    std::vector<double> center_frequencies_hz{5.0e9, 5.85e9};
};

struct FanStudySettings {
    double center_hz = 5.0e9;
    double bandwidth_hz = 20e6;
    std::size_t calibration_snapshots = 100;
    std::size_t optimizer_snapshots = 20;
    double optimizer_t_step_s = 0.0071;
    /// SNR of the temporal-std objective; +inf evaluates it on noiseless snapshots.
    double optimizer_snr_db = std::numeric_limits<double>::infinity();
};

struct OptimizerSettings {
    std::size_t population = 50;
    double elite_fraction = 0.25;
    std::size_t generations = 60;
    double p_min = 0.05;
};

struct ScenarioConfig {
    std::string profile = "desk";
    std::uint64_t seed = 1;
    std::string output_dir = "runs";
    unsigned workers = 1;
    SceneParams scene;
    DetectionSettings detection;
    RisStudySettings ris_study;
    VarianceSettings variance;
    AttackSettings attack;
    FanStudySettings fan_study;
    OptimizerSettings optimizer;

    /// Defaults of a named scale profile ("desk" or "paper").
    static ScenarioConfig defaults(const std::string& profile);

    /// Throws ConfigError on out-of-range or inconsistent settings.
    void validate() const;

    Enclosure build_enclosure() const { return build_scene(scene); }
    OptimizerParams optimizer_params(std::uint64_t seed) const;
    CalibrationSpec calibration(std::size_t snapshots) const;
    TrialSpec trials(const std::vector<std::size_t>& holes) const;
};

ScaleProfile parse_profile(const std::string& name);

nlohmann::json to_json(const ScenarioConfig& config);

/// Overlays `j` onto `base`; keys absent from `j` keep their base values. Accepts a
/// bare scenario object or a run manifest (uses its "config" member). Unknown keys
/// are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig base);

/// Reads a scenario or manifest file. The profile named in the file (default: `profile`)
/// provides the defaults for absent keys.
ScenarioConfig load_scenario(const std::filesystem::path& path, const std::string& profile = "desk");

/// Profile of a provisioned deployment: settings as JSON, references as binary files.
void save_profile(const DetectionProfile& profile, const std::filesystem::path& dir);
DetectionProfile load_profile(const std::filesystem::path& dir);

}  // namespace atr
