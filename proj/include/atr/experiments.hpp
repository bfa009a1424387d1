#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "atr/scenario.hpp"

namespace atr {

ATR_DEFINE_ERROR(MissingFan, Error);

/// Files and headline numbers of one runner invocation. The run directory holds
/// manifest.json, summary.json and the CSV files listed in `files`.
struct RunOutput {
    std::string runner;
    std::filesystem::path dir;
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;
};

/// Runner names accepted by run_named(), in CLI spelling.
const std::vector<std::string>& runner_names();

RunOutput run_bandwidth_sweep(const ScenarioConfig& config);
RunOutput run_ris_study(const ScenarioConfig& config);
RunOutput run_variance_profile(const ScenarioConfig& config);
RunOutput run_attack_study(const ScenarioConfig& config);
RunOutput run_fan_study(const ScenarioConfig& config);
RunOutput run_named(const std::string& runner, const ScenarioConfig& config);

/// Band for (fc, bw); bw = kFullBand selects the whole grid span.
BandSelection resolve_band(const FrequencyGrid& grid, double fc_hz, double bw_hz);

/// Cartesian product of bandwidths and centers with the full band listed once.
/// Pairs that do not fit on the grid are returned in `skipped` instead.
std::vector<BandSelection> resolve_bands(const FrequencyGrid& grid, const std::vector<double>& bandwidths_hz,
                                         const std::vector<double>& centers_hz,
                                         std::vector<std::pair<double, double>>* skipped = nullptr);

/// Metric for a band under the scenario's metric setting ("auto" picks by bandwidth).
Metric scenario_metric(const ScenarioConfig& config, const BandSelection& band);

/// Secret configurations of the defender, derived from the master seed.
std::vector<RisConfig> secret_configs(const ScenarioConfig& config, std::size_t n, std::size_t length);

/// Per-bin population variance of |H| over `configs` (noiseless, fan held still).
std::vector<double> magnitude_variance(const Enclosure& enclosure, const std::vector<RisConfig>& configs);

/// Linear-interpolation quantile (q in [0, 1]) of a non-empty sample.
double quantile(std::vector<double> values, double q);

}  // namespace atr
