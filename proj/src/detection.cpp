#include "atr/detection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "atr/parallel.hpp"
#include "atr/seeding.hpp"

namespace atr {

std::string to_string(Metric metric) { return metric == Metric::Mnd ? "mnd" : "euclidean"; }

Metric parse_metric(std::string_view text) {
    if (text == "mnd" || text == "MND") return Metric::Mnd;
    if (text == "euclidean" || text == "Euclidean") return Metric::Euclidean;
    throw ConfigError("unknown metric '" + std::string(text) + "' (expected mnd or euclidean)");
}

Metric metric_for_band(const BandSelection& band) {
    return band.bandwidth_hz >= 1.0e9 ? Metric::Mnd : Metric::Euclidean;
}

std::string metric_formula(Metric metric) {
    if (metric == Metric::Mnd) return "mean_f | |H(f)| - |H_R(f)| | / (|H_R(f)| + 1e-12 max_f |H_R(f)|)";
    return "sqrt(sum_f (|H(f)| - |H_R(f)|)^2)";
}

double euclidean_distance(const ChannelResponse& a, const ChannelResponse& b) {
    require_same_grid(a.grid(), b.grid());
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a[k]) - std::abs(b[k]);
        acc += d * d;
    }
    return std::sqrt(acc);
}

double mnd(const ChannelResponse& measurement, const ChannelResponse& reference) {
    require_same_grid(measurement.grid(), reference.grid());
    const auto ref = magnitude_vector(reference);
    const double peak = *std::max_element(ref.begin(), ref.end());
    const double eps = 1e-12 * peak;
    if (!(peak > 0.0)) throw DegenerateReference("MND: reference magnitude is zero everywhere");
    double acc = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) acc += std::abs(std::abs(measurement[k]) - ref[k]) / (ref[k] + eps);
    return acc / static_cast<double>(ref.size());
}

double distance(Metric metric, const ChannelResponse& measurement, const ChannelResponse& reference) {
    return metric == Metric::Mnd ? mnd(measurement, reference) : euclidean_distance(measurement, reference);
}

ConfusionReport ConfusionReport::from_counts(const Counts& counts) {
    ConfusionReport r;
    r.counts = counts;
    const std::size_t negatives = counts.fp + counts.tn;
    const std::size_t positives = counts.tp + counts.fn;
    r.fpr = negatives ? static_cast<double>(counts.fp) / static_cast<double>(negatives) : 0.0;
    r.fnr = positives ? static_cast<double>(counts.fn) / static_cast<double>(positives) : 0.0;
    r.balanced_accuracy = 1.0 - 0.5 * (r.fpr + r.fnr);
    return r;
}

std::uint64_t config_key(const RisConfig& config) {
    std::uint64_t h = mix64(config.size());
    std::uint64_t word = 0;
    for (std::size_t l = 0; l < config.size(); ++l) {
        word = (word << 1) | config.bit(l);
        if (l % 64 == 63) {
            h = mix64(h ^ word);
            word = 0;
        }
    }
    return mix64(h ^ word ^ 0x5bd1e995u);
}

namespace {

Enclosure fan_state(const Enclosure& enclosure, bool fan_on) {
    return fan_on ? enclosure : with_fan_stopped(enclosure);
}

void validate_configs(const std::vector<RisConfig>& configs, const SceneBasis& scene) {
    if (configs.empty()) throw ConfigError("provision: at least one RIS configuration required");
    std::set<RisConfig> unique(configs.begin(), configs.end());
    if (unique.size() != configs.size()) throw ConfigError("provision: RIS configurations must be distinct");
    for (const auto& c : configs) scene.check_config(c);
}

double calibrate(const DetectionProfile& profile, const Bench& bench, const CalibrationSpec& cal,
                 std::vector<double>& distances) {
    distances.clear();
    double worst = 0.0;
    for (const auto& [config, reference] : profile.references) {
        const auto base = bench.configured(config);
        for (std::size_t k = 1; k <= cal.snapshots; ++k) {
            const double t = cal.t_start_s + static_cast<double>(k) * cal.t_step_s;
            const auto noise = cal.noise.reseeded(derive_seed(cal.noise.rng_seed, {k}));
            const auto m = extract_band(bench.measure(base, nullptr, t, noise), profile.band);
            const double d = distance(profile.metric, m, reference);
            distances.push_back(d);
            worst = std::max(worst, d);
        }
    }
    return worst;
}

}  // namespace

DetectionProfile provision(const Bench& bench_in, const std::vector<RisConfig>& configs, const BandSelection& band,
                           Metric metric, const CalibrationSpec& calibration) {
    if (!(calibration.margin >= 1.0) || !std::isfinite(calibration.margin))
        throw ConfigError("calibration margin must be a finite factor >= 1");
    band_indices(bench_in.scene().grid(), band);
    std::optional<Bench> stopped;
    if (!calibration.fan_on && bench_in.enclosure().fan) stopped.emplace(fan_state(bench_in.enclosure(), false));
    const Bench& bench = stopped ? *stopped : bench_in;

    validate_configs(configs, bench.scene());
    DetectionProfile profile;
    profile.band = band;
    profile.metric = metric;
    for (const auto& config : configs) {
        const auto noise = calibration.noise.reseeded(derive_seed(calibration.noise.rng_seed, {0}));
        const auto full = bench.measure(config, nullptr, calibration.t_start_s, noise);
        profile.references.emplace(config, extract_band(full, band));
    }
    const double worst = calibrate(profile, bench, calibration, profile.calibration_distances);
    profile.threshold = worst * calibration.margin;
    profile.provenance = {calibration, worst, calibration.fan_on ? "fan-on calibration" : "fan-off calibration"};
    return profile;
}

DetectionProfile provision(const Enclosure& enclosure, const std::vector<RisConfig>& configs,
                           const BandSelection& band, Metric metric, const CalibrationSpec& calibration) {
    return provision(Bench(enclosure), configs, band, metric, calibration);
}

DetectionProfile recalibrate(const DetectionProfile& profile, const Bench& bench_in, const CalibrationSpec& calibration,
                             std::string label) {
    std::optional<Bench> stopped;
    if (!calibration.fan_on && bench_in.enclosure().fan) stopped.emplace(fan_state(bench_in.enclosure(), false));
    const Bench& bench = stopped ? *stopped : bench_in;
    DetectionProfile out = profile;
    const double worst = calibrate(out, bench, calibration, out.calibration_distances);
    out.threshold = worst * calibration.margin;
    out.provenance = {calibration, worst, std::move(label)};
    return out;
}

Verdict detect(const DetectionProfile& profile, const ChannelResponse& measurement, const RisConfig& config) {
    auto it = profile.references.find(config);
    if (it == profile.references.end())
        throw UnknownConfig("no reference provisioned for configuration " + config.to_hex());
    const auto& reference = it->second;
    const double d = measurement.grid() == reference.grid()
                         ? distance(profile.metric, measurement, reference)
                         : distance(profile.metric, extract_band(measurement, profile.band), reference);
    return {d, profile.threshold, d > profile.threshold};
}

std::vector<Evaluation> evaluate_many(const std::vector<const DetectionProfile*>& profiles, const Bench& bench_in,
                                      const TrialSpec& trials, unsigned workers) {
    if (trials.holes.empty() || trials.depths_m.empty()) throw ConfigError("evaluate: empty trial axes");
    // configs[p] lists the configurations evaluated under profile p; union holds each once
    std::vector<RisConfig> union_configs;
    std::map<RisConfig, std::size_t> slot;
    std::vector<std::vector<std::size_t>> per_profile(profiles.size());
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        std::vector<RisConfig> configs = trials.configs;
        if (configs.empty()) {
            for (const auto& [c, r] : profiles[p]->references) configs.push_back(c);
        }
        for (const auto& c : configs) {
            if (!profiles[p]->references.contains(c))
                throw UnknownConfig("evaluate: configuration " + c.to_hex() + " was not provisioned");
            auto [it, inserted] = slot.emplace(c, union_configs.size());
            if (inserted) union_configs.push_back(c);
            per_profile[p].push_back(it->second);
        }
    }
    std::optional<Bench> stopped;
    if (!trials.fan_on && bench_in.enclosure().fan) stopped.emplace(fan_state(bench_in.enclosure(), false));
    const Bench& bench = stopped ? *stopped : bench_in;
    const auto& enc = bench.enclosure();
    for (auto h : trials.holes) {
        if (h >= enc.holes.size()) throw InvalidHoleIndex("evaluate: hole index " + std::to_string(h) + " out of range");
    }
    const cplx amplitude = trials.needle_amplitude.value_or(default_needle_amplitude(enc));

    std::vector<std::vector<cplx>> configured(union_configs.size());
    parallel_for(union_configs.size(), workers, [&](std::size_t i) { configured[i] = bench.configured(union_configs[i]); });

    const std::size_t n_depths = trials.depths_m.size();
    const std::size_t n_items = trials.holes.size() * n_depths;
    // distances[item][profile] holds (untampered, tampered) per configuration of that profile
    std::vector<std::vector<std::vector<std::pair<double, double>>>> distances(n_items);

    auto trial_time = [&](std::uint64_t key) {
        return trials.t_start_s + trials.t_step_s * static_cast<double>(key % 4096);
    };

    parallel_for(n_items, workers, [&](std::size_t item) {
        const std::size_t hole = trials.holes[item / n_depths];
        const double depth = trials.depths_m[item % n_depths];
        const TamperBasis tb(bench.scene(), TamperSpec{hole, depth, amplitude});
        const std::uint64_t depth_key = std::bit_cast<std::uint64_t>(depth);
        std::vector<std::optional<std::pair<ChannelResponse, ChannelResponse>>> measured(union_configs.size());
        auto& out = distances[item];
        out.resize(profiles.size());
        for (std::size_t p = 0; p < profiles.size(); ++p) {
            for (std::size_t i : per_profile[p]) {
                const auto& config = union_configs[i];
                if (!measured[i]) {
                    const std::uint64_t key_u = derive_seed(trials.seed, {hole, depth_key, 0});
                    const std::uint64_t key_t = derive_seed(trials.seed, {hole, depth_key, 1});
                    auto honest = bench.measure(configured[i], nullptr, trial_time(key_u),
                                                trials.noise.reseeded(derive_seed(trials.noise.rng_seed, {key_u})));
                    const auto part = tb.imprint(config);
                    auto tampered = bench.measure(configured[i], &part, trial_time(key_t),
                                                  trials.noise.reseeded(derive_seed(trials.noise.rng_seed, {key_t})));
                    measured[i].emplace(std::move(honest), std::move(tampered));
                }
                out[p].emplace_back(detect(*profiles[p], measured[i]->first, config).distance,
                                    detect(*profiles[p], measured[i]->second, config).distance);
            }
        }
    });

    std::vector<Evaluation> evals(profiles.size());
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        const double threshold = profiles[p]->threshold;
        Evaluation& eval = evals[p];
        Counts counts;
        std::map<std::size_t, HoleRate> per_hole;
        for (std::size_t item = 0; item < n_items; ++item) {
            const std::size_t hole = trials.holes[item / n_depths];
            const double depth = trials.depths_m[item % n_depths];
            for (std::size_t j = 0; j < per_profile[p].size(); ++j) {
                const auto [du, dt] = distances[item][p][j];
                if (du > threshold) ++counts.fp;
                else ++counts.tn;
                auto& rate = per_hole[hole];
                rate.hole_index = hole;
                rate.x = enc.holes[hole].entry.x;
                rate.y = enc.holes[hole].entry.y;
                ++rate.trials;
                if (dt > threshold) ++counts.tp;
                else {
                    ++counts.fn;
                    ++rate.missed;
                }
                eval.trials.push_back({hole, depth, union_configs[per_profile[p][j]], du, dt});
            }
        }
        eval.report = ConfusionReport::from_counts(counts);
        for (auto& [h, r] : per_hole) eval.per_hole.push_back(r);
    }
    return evals;
}

Evaluation evaluate(const DetectionProfile& profile, const Bench& bench, const TrialSpec& trials, unsigned workers) {
    return std::move(evaluate_many({&profile}, bench, trials, workers).front());
}

Evaluation evaluate(const DetectionProfile& profile, const Enclosure& enclosure, const TrialSpec& trials,
                    unsigned workers) {
    return evaluate(profile, Bench(enclosure), trials, workers);
}

}  // namespace atr
