#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atr/core_types.hpp"
#include "atr/enclosure.hpp"

namespace atr {

ATR_DEFINE_ERROR(DegenerateReference, Error);
ATR_DEFINE_ERROR(UnknownConfig, Error);

enum class Metric { Mnd, Euclidean };

std::string to_string(Metric metric);
Metric parse_metric(std::string_view text);

/// MND for bands of at least 1 GHz, Euclidean below.
Metric metric_for_band(const BandSelection& band);

/// Human-readable formula recorded in run metadata.
std::string metric_formula(Metric metric);

/// L2 norm of the difference of magnitude vectors.
double euclidean_distance(const ChannelResponse& a, const ChannelResponse& b);

/// Mean over bins of ||H| - |H_R|| / (|H_R| + eps), eps = 1e-12 max |H_R|.
double mnd(const ChannelResponse& measurement, const ChannelResponse& reference);

double distance(Metric metric, const ChannelResponse& measurement, const ChannelResponse& reference);

/// Conditions under which untampered calibration snapshots are taken.
struct CalibrationSpec {
    std::size_t snapshots = 10;
    double t_start_s = 0.0;
    double t_step_s = 0.0123;
    NoiseSpec noise{40.0, 0};
    bool fan_on = false;
    double margin = 1.0;
};

/// Where a threshold came from.
struct ThresholdProvenance {
    CalibrationSpec calibration;
    double max_calibration_distance = 0.0;
    std::string label;  // e.g. "fan-off calibration"
};

struct DetectionProfile {
    std::map<RisConfig, ChannelResponse> references;  // in-band H_R per configuration
    BandSelection band;
    Metric metric = Metric::Euclidean;
    double threshold = 0.0;
    ThresholdProvenance provenance;
    std::vector<double> calibration_distances;  // config-major, snapshot-minor
};

struct Verdict {
    double distance = 0.0;
    double threshold = 0.0;
    bool tampered = false;
};

struct Counts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct ConfusionReport {
    Counts counts;
    double fpr = 0.0;
    double fnr = 0.0;
    double balanced_accuracy = 1.0;

    static ConfusionReport from_counts(const Counts& counts);
};

/// Provision one reference per configuration and calibrate the threshold as the
/// maximum in-band distance of untampered snapshots (times the margin). Snapshot k
/// (k = 0 is the reference) draws noise from derive_seed(noise seed, {k}) for every
/// configuration.
DetectionProfile provision(const Enclosure& enclosure, const std::vector<RisConfig>& configs,
                           const BandSelection& band, Metric metric, const CalibrationSpec& calibration);
DetectionProfile provision(const Bench& bench, const std::vector<RisConfig>& configs, const BandSelection& band,
                           Metric metric, const CalibrationSpec& calibration);

/// Keeps the references and recomputes the threshold under new calibration conditions.
DetectionProfile recalibrate(const DetectionProfile& profile, const Bench& bench, const CalibrationSpec& calibration,
                             std::string label);

/// In-band distance of `measurement` (full grid or already band-limited) to the
/// reference for `config`; tampered iff distance > threshold.
Verdict detect(const DetectionProfile& profile, const ChannelResponse& measurement, const RisConfig& config);

struct TrialSpec {
    std::vector<std::size_t> holes;
    std::vector<double> depths_m{0.020};
    std::vector<RisConfig> configs;  // empty: every configuration in the profile
    NoiseSpec noise{40.0, 0};
    bool fan_on = false;
    double t_start_s = 1.0;
    double t_step_s = 0.0071;
    std::optional<cplx> needle_amplitude;  // default: default_needle_amplitude(scene)
    std::uint64_t seed = 0;
};

struct HoleRate {
    std::size_t hole_index = 0;
    double x = 0.0, y = 0.0;
    std::size_t missed = 0;
    std::size_t trials = 0;
    double fnr() const noexcept { return trials ? static_cast<double>(missed) / static_cast<double>(trials) : 0.0; }
};

struct TrialOutcome {
    std::size_t hole_index = 0;
    double depth_m = 0.0;
    RisConfig config;
    double distance_untampered = 0.0;
    double distance_tampered = 0.0;
};

struct Evaluation {
    ConfusionReport report;
    std::vector<HoleRate> per_hole;
    std::vector<TrialOutcome> trials;
};

/// Paired untampered / tampered measurements for every (hole, depth, config).
/// Noise and time of each trial derive from (hole, depth) and the tamper state, never
/// from the position of the trial or from the configuration: every configuration sees
/// the same draws, so configurations are compared on common random numbers.
Evaluation evaluate(const DetectionProfile& profile, const Enclosure& enclosure, const TrialSpec& trials,
                    unsigned workers = 1);
Evaluation evaluate(const DetectionProfile& profile, const Bench& bench, const TrialSpec& trials,
                    unsigned workers = 1);

/// evaluate() for several profiles at once. Each trial measurement is generated once
/// and scored under every profile that provisioned its configuration; results equal
/// separate evaluate() calls.
std::vector<Evaluation> evaluate_many(const std::vector<const DetectionProfile*>& profiles, const Bench& bench,
                                      const TrialSpec& trials, unsigned workers = 1);

/// Stable 64-bit key for a configuration (seed derivation).
std::uint64_t config_key(const RisConfig& config);

}  // namespace atr
