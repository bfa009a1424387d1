#include "atr/adversary.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "atr/parallel.hpp"
#include "atr/response_io.hpp"
#include "atr/seeding.hpp"

namespace atr {

std::string to_string(AttackStrategy strategy) {
    switch (strategy) {
        case AttackStrategy::ExactConfig: return "exact-config";
        case AttackStrategy::RandomGuess: return "random-guess";
        case AttackStrategy::AverageImprint: return "average-imprint";
    }
    return "unknown";
}

AttackStrategy parse_strategy(std::string_view text) {
    if (text == "exact-config" || text == "ExactConfig") return AttackStrategy::ExactConfig;
    if (text == "random-guess" || text == "RandomGuess") return AttackStrategy::RandomGuess;
    if (text == "average-imprint" || text == "AverageImprint") return AttackStrategy::AverageImprint;
    throw ConfigError("unknown attack strategy '" + std::string(text) + "'");
}

Enclosure make_replica(const Enclosure& enclosure, double perturbation, std::uint64_t seed) {
    if (!std::isfinite(perturbation) || perturbation < 0.0) throw ConfigError("replica perturbation must be >= 0");
    Enclosure replica = enclosure;
    if (perturbation == 0.0) return replica;
    Rng rng(derive_seed(seed, "replica"));
    for (auto& s : replica.scatterers) {
        const double re = rng.normal();
        const double im = rng.normal();
        s.amplitude *= cplx(1.0 + perturbation * re, perturbation * im);
        s.position = s.position + Vec3{rng.normal(), rng.normal(), rng.normal()} * (0.01 * perturbation);
    }
    return replica;
}

std::optional<std::string> coupling_warning(const AttackPlan& plan) {
    if (plan.replica.second_order_coupling != 0.0) return std::nullopt;
    return "second-order coupling is disabled: the tamper imprint does not depend on the RIS configuration, "
           "so every attack strategy produces the same compensation";
}

ChannelResponse replica_imprint(const AttackPlan& plan, const TamperSpec& tamper, const RisConfig& guess) {
    return imprint(plan.replica, guess, tamper, 0.0);
}

namespace {

void require_pool(const AttackPlan& plan) {
    if (plan.guess_pool.empty())
        throw EmptyGuessPool("attack strategy " + to_string(plan.strategy) + " needs a non-empty guess pool");
}

// Full-grid compensation from a prebuilt replica tamper basis.
std::vector<cplx> compensation(const AttackPlan& plan, const TamperBasis& replica, const RisConfig* leaked) {
    std::vector<cplx> out;
    switch (plan.strategy) {
        case AttackStrategy::ExactConfig:
            if (!leaked) throw ConfigNotLeaked("exact-config attack requires the true configuration to be leaked");
            out = replica.imprint(*leaked);
            break;
        case AttackStrategy::RandomGuess:
            require_pool(plan);
            out = replica.imprint(random_guess(plan, replica.tamper()));
            break;
        case AttackStrategy::AverageImprint: {
            require_pool(plan);
            for (const auto& c : plan.guess_pool) {
                const auto part = replica.imprint(c);
                if (out.empty()) out.assign(part.size(), cplx{});
                for (std::size_t k = 0; k < part.size(); ++k) out[k] += part[k];
            }
            const double inv = 1.0 / static_cast<double>(plan.guess_pool.size());
            for (auto& v : out) v *= inv;
            break;
        }
    }
    for (auto& v : out) v = -v;
    return out;
}

}  // namespace

const RisConfig& random_guess(const AttackPlan& plan, const TamperSpec& tamper) {
    require_pool(plan);
    Rng rng(derive_seed(plan.seed, {tamper.hole_index, std::bit_cast<std::uint64_t>(tamper.depth_m)}));
    return plan.guess_pool[rng.index(plan.guess_pool.size())];
}

ChannelResponse compensation_spectrum(const AttackPlan& plan, const TamperSpec& tamper) {
    const SceneBasis scene(plan.replica);
    const TamperBasis replica(scene, tamper);
    const RisConfig* leaked = plan.leaked_config ? &*plan.leaked_config : nullptr;
    return ChannelResponse(scene.grid(), compensation(plan, replica, leaked));
}

ChannelResponse attacked_measurement(const Enclosure& enclosure, const RisConfig& true_config,
                                     const std::optional<TamperSpec>& tamper, const AttackPlan& plan, double time_s,
                                     const NoiseSpec& noise) {
    auto honest = synthesize(enclosure, true_config, tamper, time_s, noise);
    if (!tamper) return honest;
    const auto comp = compensation_spectrum(plan, *tamper);
    require_same_grid(honest.grid(), comp.grid());
    return honest + comp;
}

AttackSweep attack_fnr_sweep(const Enclosure& enclosure, const std::vector<RisConfig>& secret_configs,
                             const AttackPlan& plan, const std::vector<BandSelection>& bands,
                             const CalibrationSpec& calibration, const TrialSpec& trials, unsigned workers) {
    if (bands.empty()) throw ConfigError("attack sweep: no bands");
    if (trials.holes.empty() || trials.depths_m.empty()) throw ConfigError("attack sweep: empty trial axes");
    if (plan.strategy != AttackStrategy::ExactConfig) require_pool(plan);
    const Bench bench(trials.fan_on ? enclosure : with_fan_stopped(enclosure));
    const Bench replica_bench(plan.replica);
    require_same_grid(bench.scene().grid(), replica_bench.scene().grid());
    const auto& enc = bench.enclosure();
    for (auto h : trials.holes) {
        if (h >= enc.holes.size()) throw InvalidHoleIndex("attack sweep: hole index " + std::to_string(h) + " out of range");
    }
    const Bench calibration_bench(enclosure);
    std::vector<DetectionProfile> profiles;
    for (const auto& band : bands)
        profiles.push_back(provision(calibration_bench, secret_configs, band, metric_for_band(band), calibration));

    const std::vector<RisConfig>& configs = secret_configs;
    std::vector<std::vector<cplx>> configured(configs.size());
    parallel_for(configs.size(), workers, [&](std::size_t i) { configured[i] = bench.configured(configs[i]); });
    const cplx amplitude = trials.needle_amplitude.value_or(default_needle_amplitude(enc));

    auto trial_time = [&](std::uint64_t key) {
        return trials.t_start_s + trials.t_step_s * static_cast<double>(key % 4096);
    };

    const std::size_t n_depths = trials.depths_m.size();
    const std::size_t n_items = trials.holes.size() * n_depths;
    // per item, per config, per band: (honest, attacked)
    std::vector<std::vector<std::pair<double, double>>> distances(n_items);
    parallel_for(n_items, workers, [&](std::size_t item) {
        const std::size_t hole = trials.holes[item / n_depths];
        const double depth = trials.depths_m[item % n_depths];
        const TamperSpec tamper{hole, depth, amplitude};
        const TamperBasis truth(bench.scene(), tamper);
        const TamperBasis replica(replica_bench.scene(), tamper);
        std::optional<std::vector<cplx>> shared;
        if (plan.strategy != AttackStrategy::ExactConfig) shared = compensation(plan, replica, nullptr);
        const std::uint64_t depth_key = std::bit_cast<std::uint64_t>(depth);
        auto& out = distances[item];
        out.reserve(configs.size() * bands.size());
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const std::uint64_t key_u = derive_seed(trials.seed, {hole, depth_key, 0});
            const std::uint64_t key_t = derive_seed(trials.seed, {hole, depth_key, 1});
            const auto honest = bench.measure(configured[i], nullptr, trial_time(key_u),
                                              trials.noise.reseeded(derive_seed(trials.noise.rng_seed, {key_u})));
            const auto part = truth.imprint(configs[i]);
            const auto comp = shared ? *shared : compensation(plan, replica, &configs[i]);
            const auto tampered = bench.measure(configured[i], &part, trial_time(key_t),
                                                trials.noise.reseeded(derive_seed(trials.noise.rng_seed, {key_t})));
            const ChannelResponse attacked = tampered + ChannelResponse(tampered.grid(), comp);
            for (const auto& profile : profiles) {
                out.emplace_back(detect(profile, honest, configs[i]).distance,
                                 detect(profile, attacked, configs[i]).distance);
            }
        }
    });

    AttackSweep sweep;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const auto& profile = profiles[b];
        AttackBandResult result;
        result.band = bands[b];
        result.metric = profile.metric;
        result.threshold = profile.threshold;
        result.min_attacked = std::numeric_limits<double>::infinity();
        std::size_t evaded = 0, flagged_honest = 0, total = 0;
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> per_hole;  // evaded, trials
        for (std::size_t item = 0; item < n_items; ++item) {
            const std::size_t hole = trials.holes[item / n_depths];
            const double depth = trials.depths_m[item % n_depths];
            for (std::size_t i = 0; i < configs.size(); ++i) {
                const auto [dh, da] = distances[item][i * bands.size() + b];
                const bool ev = !(da > profile.threshold);
                sweep.rows.push_back({plan.strategy, bands[b].center_hz, bands[b].bandwidth_hz, hole, depth, configs[i],
                                      dh, da, profile.threshold, ev});
                evaded += ev;
                flagged_honest += dh > profile.threshold;
                ++total;
                auto& h = per_hole[hole];
                h.first += ev;
                ++h.second;
                result.max_honest = std::max(result.max_honest, dh);
                result.min_attacked = std::min(result.min_attacked, da);
            }
        }
        result.fnr = static_cast<double>(evaded) / static_cast<double>(total);
        result.fpr = static_cast<double>(flagged_honest) / static_cast<double>(total);
        std::size_t holes_evaded = 0;
        for (const auto& [h, counts] : per_hole) holes_evaded += 2 * counts.first > counts.second;
        result.hole_evasion = static_cast<double>(holes_evaded) / static_cast<double>(per_hole.size());
        sweep.bands.push_back(result);
    }
    return sweep;
}

std::string attack_csv(const std::vector<AttackRow>& rows) {
    std::ostringstream out;
    out << "strategy,fc_hz,bw_hz,hole_index,distance_honest,distance_attacked,threshold,evaded\n";
    for (const auto& r : rows) {
        out << to_string(r.strategy) << ',' << io::format_double(r.fc_hz) << ',' << io::format_double(r.bw_hz) << ','
            << r.hole_index << ',' << io::format_double(r.distance_honest) << ','
            << io::format_double(r.distance_attacked) << ',' << io::format_double(r.threshold) << ','
            << (r.evaded ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace atr
