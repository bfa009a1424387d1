#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atr/detection.hpp"
#include "atr/enclosure.hpp"

namespace atr {

ATR_DEFINE_ERROR(EmptyGuessPool, Error);
ATR_DEFINE_ERROR(ConfigNotLeaked, Error);

enum class AttackStrategy { ExactConfig, RandomGuess, AverageImprint };

std::string to_string(AttackStrategy strategy);
AttackStrategy parse_strategy(std::string_view text);

/// The compensation attacker. The injected signal reaches the receiver through a
/// unity channel: it is added to the measured response unchanged.
struct AttackPlan {
    AttackStrategy strategy = AttackStrategy::AverageImprint;
    Enclosure replica;                       // attacker's clone of the scene
    std::vector<RisConfig> guess_pool;       // RandomGuess / AverageImprint
    std::optional<RisConfig> leaked_config;  // ExactConfig only; set by harnesses that leak it
    std::uint64_t seed = 0;
};

/// Copy of `enclosure` with scatterer amplitudes and positions jittered by a relative
/// `perturbation` (amplitude factor 1 + p N(0,1) per component, positions p x 1 cm N(0,1)).
/// perturbation 0 returns an exact copy.
Enclosure make_replica(const Enclosure& enclosure, double perturbation, std::uint64_t seed);

/// Set when the replica has no needle <-> RIS coupling: the imprint is then the same
/// for every configuration and guessing the configuration costs the attacker nothing.
std::optional<std::string> coupling_warning(const AttackPlan& plan);

/// Noiseless imprint of `tamper` on the replica for a guessed configuration.
ChannelResponse replica_imprint(const AttackPlan& plan, const TamperSpec& tamper, const RisConfig& guess);

/// Configuration drawn by RandomGuess for this tamper.
const RisConfig& random_guess(const AttackPlan& plan, const TamperSpec& tamper);

/// Negated imprint estimate the attacker injects.
ChannelResponse compensation_spectrum(const AttackPlan& plan, const TamperSpec& tamper);

/// synthesize(enclosure, true_config, tamper, time, noise) + compensation (zero without tamper).
ChannelResponse attacked_measurement(const Enclosure& enclosure, const RisConfig& true_config,
                                     const std::optional<TamperSpec>& tamper, const AttackPlan& plan, double time_s,
                                     const NoiseSpec& noise);

struct AttackRow {
    AttackStrategy strategy;
    double fc_hz = 0.0;
    double bw_hz = 0.0;
    std::size_t hole_index = 0;
    double depth_m = 0.0;
    RisConfig config;
    double distance_honest = 0.0;    // untampered, no injection
    double distance_attacked = 0.0;  // tampered plus compensation
    double threshold = 0.0;
    bool evaded = false;
};

struct AttackBandResult {
    BandSelection band;
    Metric metric = Metric::Euclidean;
    double threshold = 0.0;
    double fnr = 0.0;             // attacked trials not flagged
    double fpr = 0.0;             // honest trials flagged
    double hole_evasion = 0.0;    // fraction of holes where most attacked trials evaded
    double max_honest = 0.0;
    double min_attacked = 0.0;
};

struct AttackSweep {
    std::vector<AttackBandResult> bands;
    std::vector<AttackRow> rows;  // band-major, then hole, depth, config
};

/// For every band: provision the secret configurations, then measure each (hole, depth,
/// config) honestly and under attack. ExactConfig leaks the true configuration per trial.
/// Trial noise and time derive from the trial identity, so all bands see the same draws.
AttackSweep attack_fnr_sweep(const Enclosure& enclosure, const std::vector<RisConfig>& secret_configs,
                             const AttackPlan& plan, const std::vector<BandSelection>& bands,
                             const CalibrationSpec& calibration, const TrialSpec& trials, unsigned workers = 1);

/// Comma-separated rows with header
/// strategy,fc_hz,bw_hz,hole_index,distance_honest,distance_attacked,threshold,evaded
std::string attack_csv(const std::vector<AttackRow>& rows);

}  // namespace atr
