#include "atr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "atr/adversary.hpp"
#include "atr/parallel.hpp"
#include "atr/response_io.hpp"
#include "atr/seeding.hpp"

namespace atr {

using nlohmann::json;
using io::format_double;

namespace {

std::vector<std::size_t> all_holes(const Enclosure& enc) {
    std::vector<std::size_t> holes(enc.holes.size());
    std::iota(holes.begin(), holes.end(), std::size_t{0});
    return holes;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

json band_json(const BandSelection& band) { return {{"center_hz", band.center_hz}, {"bandwidth_hz", band.bandwidth_hz}}; }

// Collects the CSV tables of one run and writes everything in one place.
class RunWriter {
public:
    RunWriter(const ScenarioConfig& config, std::string runner) : config_(config), runner_(std::move(runner)) {
        dir_ = std::filesystem::path(config.output_dir) / (runner_ + "-seed" + std::to_string(config.seed));
    }

    std::string stem(const std::string& part = "") const {
        return runner_ + (part.empty() ? "" : "_" + part) + "_seed" + std::to_string(config_.seed) + ".csv";
    }

    void table(const std::string& part, std::string body) { tables_.emplace_back(stem(part), std::move(body)); }

    RunOutput finish(json summary, json extra_manifest = json::object()) {
        std::filesystem::create_directories(dir_);
        RunOutput out;
        out.runner = runner_;
        out.dir = dir_;
        json files = json::array();
        for (const auto& [name, body] : tables_) {
            write_file(dir_ / name, body);
            out.files.push_back(dir_ / name);
            files.push_back(name);
        }
        json manifest = {
            {"runner", runner_},
            {"config", to_json(config_)},
            {"second_order_coupling", config_.scene.second_order_coupling},
            {"metric_formulas", {{"mnd", metric_formula(Metric::Mnd)}, {"euclidean", metric_formula(Metric::Euclidean)}}},
            {"files", files},
        };
        for (const auto& [k, v] : extra_manifest.items()) manifest[k] = v;
        write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
        summary["runner"] = runner_;
        summary["second_order_coupling"] = config_.scene.second_order_coupling;
        write_file(dir_ / "summary.json", summary.dump(2) + "\n");
        out.summary = std::move(summary);
        return out;
    }

private:
    static void write_file(const std::filesystem::path& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        f << body;
        if (!f) throw Error("failed to write " + path.string());
    }

    const ScenarioConfig& config_;
    std::string runner_;
    std::filesystem::path dir_;
    std::vector<std::pair<std::string, std::string>> tables_;
};

std::string hole_map_csv(const std::vector<HoleRate>& rates) {
    std::ostringstream out;
    out << "hole_index,x_m,y_m,missed,trials,fnr\n";
    for (const auto& r : rates) {
        out << r.hole_index << ',' << format_double(r.x) << ',' << format_double(r.y) << ',' << r.missed << ','
            << r.trials << ',' << format_double(r.fnr()) << '\n';
    }
    return out.str();
}

// Pools per-hole rates of several evaluations (same hole set).
std::vector<HoleRate> pool_rates(const std::vector<const Evaluation*>& evals) {
    std::vector<HoleRate> pooled;
    for (const auto* e : evals) {
        if (pooled.empty()) {
            pooled = e->per_hole;
            continue;
        }
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            pooled[i].missed += e->per_hole[i].missed;
            pooled[i].trials += e->per_hole[i].trials;
        }
    }
    return pooled;
}

// One single-configuration profile per (band, config), provisioned in parallel.
std::vector<DetectionProfile> provision_each(const ScenarioConfig& config, const Bench& bench,
                                             const std::vector<BandSelection>& bands,
                                             const std::vector<RisConfig>& configs, const CalibrationSpec& cal) {
    std::vector<DetectionProfile> profiles(bands.size() * configs.size());
    parallel_for(profiles.size(), config.workers, [&](std::size_t i) {
        const auto& band = bands[i / configs.size()];
        profiles[i] = provision(bench, {configs[i % configs.size()]}, band, scenario_metric(config, band), cal);
    });
    return profiles;
}

std::vector<const DetectionProfile*> pointers(const std::vector<DetectionProfile>& profiles) {
    std::vector<const DetectionProfile*> out;
    for (const auto& p : profiles) out.push_back(&p);
    return out;
}

json skipped_json(const std::vector<std::pair<double, double>>& skipped) {
    json out = json::array();
    for (const auto& [fc, bw] : skipped) out.push_back({{"center_hz", fc}, {"bandwidth_hz", bw}});
    return out;
}

}  // namespace

const std::vector<std::string>& runner_names() {
    static const std::vector<std::string> names{"bandwidth-sweep", "ris-study", "variance-profile", "attack",
                                                "fan-study"};
    return names;
}

BandSelection resolve_band(const FrequencyGrid& grid, double fc_hz, double bw_hz) {
    if (std::isinf(bw_hz) && bw_hz > 0) return BandSelection::full_span(grid);
    return {fc_hz, bw_hz};
}

std::vector<BandSelection> resolve_bands(const FrequencyGrid& grid, const std::vector<double>& bandwidths_hz,
                                         const std::vector<double>& centers_hz,
                                         std::vector<std::pair<double, double>>* skipped) {
    std::vector<BandSelection> out;
    for (double bw : bandwidths_hz) {
        if (std::isinf(bw)) {
            out.push_back(BandSelection::full_span(grid));
            continue;
        }
        for (double fc : centers_hz) {
            const BandSelection band{fc, bw};
            try {
                (void)band_indices(grid, band);
                out.push_back(band);
            } catch (const BandOutOfRange&) {
                if (skipped) skipped->emplace_back(fc, bw);
            }
        }
    }
    return out;
}

Metric scenario_metric(const ScenarioConfig& config, const BandSelection& band) {
    return config.detection.metric == "auto" ? metric_for_band(band) : parse_metric(config.detection.metric);
}

std::vector<RisConfig> secret_configs(const ScenarioConfig& config, std::size_t n, std::size_t length) {
    return random_configs(n, length, derive_seed(config.seed, "secret-configs"));
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw ConfigError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> magnitude_variance(const Enclosure& enclosure, const std::vector<RisConfig>& configs) {
    if (configs.empty()) throw ConfigError("variance profile needs at least one configuration");
    const Bench bench(with_fan_stopped(enclosure));
    const std::size_t n = bench.scene().grid().size();
    std::vector<double> mean(n, 0.0), m2(n, 0.0);
    // Welford update, configuration by configuration
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto h = bench.measure(configs[i], nullptr, 0.0, NoiseSpec::noiseless());
        const double count = static_cast<double>(i + 1);
        for (std::size_t k = 0; k < n; ++k) {
            const double x = std::abs(h[k]);
            const double delta = x - mean[k];
            mean[k] += delta / count;
            m2[k] += delta * (x - mean[k]);
        }
    }
    for (auto& v : m2) v /= static_cast<double>(configs.size());
    return m2;
}

RunOutput run_bandwidth_sweep(const ScenarioConfig& config) {
    config.validate();
    const auto enc = config.build_enclosure();
    const Bench bench(enc);
    const auto& d = config.detection;
    std::vector<std::pair<double, double>> skipped;
    auto bands = resolve_bands(enc.grid, d.bandwidths_hz, d.center_frequencies_hz, &skipped);
    const std::size_t n_sweep = bands.size();
    for (const auto& [fc, bw] : d.map_pairs) bands.push_back(resolve_band(enc.grid, fc, bw));
    if (n_sweep == 0) throw ConfigError("bandwidth sweep: no (fc, bw) pair fits on the grid");

    const auto configs = secret_configs(config, d.random_configs, enc.ris.size());
    const auto profiles = provision_each(config, bench, bands, configs, config.calibration(d.calibration_snapshots));
    const auto evals = evaluate_many(pointers(profiles), bench, config.trials(all_holes(enc)), config.workers);

    std::ostringstream rows, per_config;
    rows << "fc_hz,bw_hz,metric,n_configs,fnr_median,fnr_p25,fnr_p75,fnr_min,fnr_max,fpr_mean\n";
    per_config << "fc_hz,bw_hz,config_index,config_hex,threshold,fpr,fnr\n";
    json summary_rows = json::array();
    for (std::size_t b = 0; b < n_sweep; ++b) {
        std::vector<double> fnr, fpr;
        for (std::size_t c = 0; c < configs.size(); ++c) {
            const auto& e = evals[b * configs.size() + c];
            const auto& p = profiles[b * configs.size() + c];
            fnr.push_back(e.report.fnr);
            fpr.push_back(e.report.fpr);
            per_config << format_double(bands[b].center_hz) << ',' << format_double(bands[b].bandwidth_hz) << ',' << c
                       << ',' << configs[c].to_hex() << ',' << format_double(p.threshold) << ','
                       << format_double(e.report.fpr) << ',' << format_double(e.report.fnr) << '\n';
        }
        const Metric metric = profiles[b * configs.size()].metric;
        const double med = quantile(fnr, 0.5);
        rows << format_double(bands[b].center_hz) << ',' << format_double(bands[b].bandwidth_hz) << ','
             << to_string(metric) << ',' << configs.size() << ',' << format_double(med) << ','
             << format_double(quantile(fnr, 0.25)) << ',' << format_double(quantile(fnr, 0.75)) << ','
             << format_double(quantile(fnr, 0.0)) << ',' << format_double(quantile(fnr, 1.0)) << ','
             << format_double(mean_of(fpr)) << '\n';
        summary_rows.push_back({{"center_hz", bands[b].center_hz},
                                {"bandwidth_hz", bands[b].bandwidth_hz},
                                {"metric", to_string(metric)},
                                {"fnr_median", med},
                                {"fnr_max", quantile(fnr, 1.0)},
                                {"fpr_mean", mean_of(fpr)}});
    }
    RunWriter writer(config, "bandwidth-sweep");
    writer.table("", rows.str());
    writer.table("configs", per_config.str());
    for (std::size_t m = 0; m < d.map_pairs.size(); ++m) {
        std::vector<const Evaluation*> group;
        for (std::size_t c = 0; c < configs.size(); ++c) group.push_back(&evals[(n_sweep + m) * configs.size() + c]);
        writer.table("map" + std::to_string(m), hole_map_csv(pool_rates(group)));
    }
    return writer.finish({{"rows", summary_rows}, {"skipped", skipped_json(skipped)}});
}

RunOutput run_ris_study(const ScenarioConfig& config) {
    config.validate();
    const auto enc = config.build_enclosure();
    const Bench bench(enc);
    const auto& d = config.detection;
    const auto configs = secret_configs(config, d.random_configs, enc.ris.size());
    const auto cal = config.calibration(d.calibration_snapshots);
    const auto trials = config.trials(all_holes(enc));

    std::ostringstream rows, summary_csv;
    rows << "fc_hz,bw_hz,kind,config_index,config_hex,threshold,fpr,fnr\n";
    summary_csv << "fc_hz,bw_hz,fnr_random_median,fnr_random_p25,fnr_optimized,optimized_rank,optimized_cost,"
                   "random_cost_median\n";
    RunWriter writer(config, "ris-study");
    json summary_rows = json::array();
    const auto& centers = config.ris_study.center_frequencies_hz;
    for (std::size_t f = 0; f < centers.size(); ++f) {
        const BandSelection band{centers[f], config.ris_study.bandwidth_hz};
        const auto cost = cost_mean_amplitude(enc, band, NoiseSpec{d.snr_db, derive_seed(config.seed, "cost-noise")});
        const auto best = optimize(cost, enc.ris.size(), config.optimizer_params(derive_seed(config.seed, {f, 0x715})));

        auto candidates = configs;
        candidates.push_back(best.best);
        const auto profiles = provision_each(config, bench, {band}, candidates, cal);
        const auto evals = evaluate_many(pointers(profiles), bench, trials, config.workers);

        std::vector<double> fnr, costs;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const bool optimized = c == configs.size();
            rows << format_double(band.center_hz) << ',' << format_double(band.bandwidth_hz) << ','
                 << (optimized ? "optimized" : "random") << ',' << (optimized ? 0 : c) << ','
                 << candidates[c].to_hex() << ',' << format_double(profiles[c].threshold) << ','
                 << format_double(evals[c].report.fpr) << ',' << format_double(evals[c].report.fnr) << '\n';
            if (!optimized) {
                fnr.push_back(evals[c].report.fnr);
                costs.push_back(cost.evaluate(candidates[c]));
            }
        }
        const double opt_fnr = evals.back().report.fnr;
        const auto rank = static_cast<double>(std::count_if(fnr.begin(), fnr.end(), [&](double x) { return x < opt_fnr; })) /
                          static_cast<double>(fnr.size());
        summary_csv << format_double(band.center_hz) << ',' << format_double(band.bandwidth_hz) << ','
                    << format_double(quantile(fnr, 0.5)) << ',' << format_double(quantile(fnr, 0.25)) << ','
                    << format_double(opt_fnr) << ',' << format_double(rank) << ',' << format_double(best.best_cost)
                    << ',' << format_double(quantile(costs, 0.5)) << '\n';
        summary_rows.push_back({{"center_hz", band.center_hz},
                                {"bandwidth_hz", band.bandwidth_hz},
                                {"fnr_random_median", quantile(fnr, 0.5)},
                                {"fnr_random_p25", quantile(fnr, 0.25)},
                                {"fnr_optimized", opt_fnr},
                                {"optimized_config", best.best.to_hex()},
                                {"optimized_cost", best.best_cost},
                                {"random_cost_median", quantile(costs, 0.5)}});

        std::vector<const Evaluation*> random_group;
        for (std::size_t c = 0; c < configs.size(); ++c) random_group.push_back(&evals[c]);
        const auto pooled = pool_rates(random_group);
        std::ostringstream map;
        map << "hole_index,x_m,y_m,fnr_random,fnr_optimized\n";
        for (std::size_t h = 0; h < pooled.size(); ++h) {
            map << pooled[h].hole_index << ',' << format_double(pooled[h].x) << ',' << format_double(pooled[h].y) << ','
                << format_double(pooled[h].fnr()) << ',' << format_double(evals.back().per_hole[h].fnr()) << '\n';
        }
        writer.table("map" + std::to_string(f), map.str());
    }
    writer.table("", rows.str());
    writer.table("summary", summary_csv.str());
    return writer.finish({{"rows", summary_rows}});
}

RunOutput run_variance_profile(const ScenarioConfig& config) {
    config.validate();
    const auto enc = config.build_enclosure();
    const auto configs =
        random_configs(config.variance.configs, enc.ris.size(), derive_seed(config.seed, "variance-configs"));
    const auto variance = magnitude_variance(enc, configs);
    std::ostringstream rows;
    rows << "f_hz,efficiency,variance\n";
    std::size_t peak = 0;
    for (std::size_t k = 0; k < variance.size(); ++k) {
        const double f = enc.grid.frequency(k);
        rows << format_double(f) << ',' << format_double(enc.ris.efficiency(f)) << ',' << format_double(variance[k])
             << '\n';
        if (variance[k] > variance[peak]) peak = k;
    }
    RunWriter writer(config, "variance-profile");
    writer.table("", rows.str());
    return writer.finish({{"configs", configs.size()},
                          {"peak_frequency_hz", enc.grid.frequency(peak)},
                          {"peak_variance", variance[peak]},
                          {"mean_variance", mean_of(variance)}});
}

RunOutput run_attack_study(const ScenarioConfig& config) {
    config.validate();
    const auto enc = config.build_enclosure();
    const auto& d = config.detection;
    const std::uint64_t defender_seed = derive_seed(config.seed, "secret-configs");
    const std::uint64_t attacker_seed = derive_seed(config.seed, "attacker");
    const auto secrets = secret_configs(config, d.random_configs, enc.ris.size());

    AttackPlan plan;
    plan.replica = make_replica(enc, config.attack.replica_perturbation, derive_seed(attacker_seed, "replica"));
    plan.guess_pool = random_configs(config.attack.pool_size, enc.ris.size(), derive_seed(attacker_seed, "pool"));
    plan.seed = derive_seed(attacker_seed, "guess");
    json warnings = json::array();
    if (auto w = coupling_warning(plan)) {
        std::cerr << "warning: " << *w << '\n';
        warnings.push_back(*w);
    }

    std::vector<std::pair<double, double>> skipped;
    const auto bands =
        resolve_bands(enc.grid, config.attack.bandwidths_hz, config.attack.center_frequencies_hz, &skipped);
    if (bands.empty()) throw ConfigError("attack study: no (fc, bw) pair fits on the grid");
    const auto cal = config.calibration(d.calibration_snapshots);
    const auto trials = config.trials(all_holes(enc));

    std::vector<AttackRow> rows;
    std::ostringstream fnr_csv;
    fnr_csv << "strategy,fc_hz,bw_hz,metric,threshold,fnr,fpr,hole_evasion,max_distance_honest,min_distance_attacked\n";
    json summary_rows = json::array();
    for (const auto& name : config.attack.strategies) {
        plan.strategy = parse_strategy(name);
        const auto sweep = attack_fnr_sweep(enc, secrets, plan, bands, cal, trials, config.workers);
        rows.insert(rows.end(), sweep.rows.begin(), sweep.rows.end());
        for (const auto& b : sweep.bands) {
            fnr_csv << to_string(plan.strategy) << ',' << format_double(b.band.center_hz) << ','
                    << format_double(b.band.bandwidth_hz) << ',' << to_string(b.metric) << ','
                    << format_double(b.threshold) << ',' << format_double(b.fnr) << ',' << format_double(b.fpr) << ','
                    << format_double(b.hole_evasion) << ',' << format_double(b.max_honest) << ','
                    << format_double(b.min_attacked) << '\n';
            summary_rows.push_back({{"strategy", to_string(plan.strategy)},
                                    {"center_hz", b.band.center_hz},
                                    {"bandwidth_hz", b.band.bandwidth_hz},
                                    {"fnr", b.fnr},
                                    {"fpr", b.fpr},
                                    {"hole_evasion", b.hole_evasion},
                                    {"max_distance_honest", b.max_honest},
                                    {"min_distance_attacked", b.min_attacked},
                                    {"threshold", b.threshold}});
        }
    }
    RunWriter writer(config, "attack");
    writer.table("", attack_csv(rows));
    writer.table("fnr", fnr_csv.str());
    return writer.finish({{"rows", summary_rows}, {"skipped", skipped_json(skipped)}, {"warnings", warnings}},
                         {{"seeds", {{"master", config.seed}, {"defender", defender_seed}, {"attacker", attacker_seed}}}});
}

RunOutput run_fan_study(const ScenarioConfig& config) {
    config.validate();
    const auto enc = config.build_enclosure();
    if (!enc.fan) throw MissingFan("fan study: the scene has no fan");
    const Bench bench(enc);
    const auto& fs = config.fan_study;
    const BandSelection band{fs.center_hz, fs.bandwidth_hz};
    const Metric metric = scenario_metric(config, band);

    const auto randoms = secret_configs(config, config.detection.random_configs, enc.ris.size());
    const auto cost = cost_temporal_std(enc, band, fs.optimizer_snapshots, fs.optimizer_t_step_s,
                                        NoiseSpec{fs.optimizer_snr_db, derive_seed(config.seed, "fan-cost-noise")});
    const auto best = optimize(cost, enc.ris.size(), config.optimizer_params(derive_seed(config.seed, "fan-optimizer")));

    auto candidates = randoms;
    candidates.push_back(best.best);
    auto cal_off = config.calibration(fs.calibration_snapshots);
    cal_off.fan_on = false;
    auto cal_on = cal_off;
    cal_on.fan_on = true;

    std::vector<DetectionProfile> identical(candidates.size()), separate(candidates.size());
    parallel_for(candidates.size(), config.workers, [&](std::size_t i) {
        identical[i] = provision(bench, {candidates[i]}, band, metric, cal_off);
        separate[i] = recalibrate(identical[i], bench, cal_on, "fan-on calibration");
    });
    auto trials = config.trials(all_holes(enc));
    trials.fan_on = false;
    const auto off = evaluate_many(pointers(identical), bench, trials, config.workers);
    trials.fan_on = true;
    auto both = pointers(identical);
    const auto sep = pointers(separate);
    both.insert(both.end(), sep.begin(), sep.end());
    const auto on = evaluate_many(both, bench, trials, config.workers);

    struct Cell {
        const char* condition;
        const char* threshold;
        std::function<const Evaluation&(std::size_t)> eval;
        std::function<double(std::size_t)> thr;
    };
    const std::size_t n = candidates.size();
    const std::vector<Cell> cells{
        {"fan-off", "identical", [&](std::size_t i) -> const Evaluation& { return off[i]; },
         [&](std::size_t i) { return identical[i].threshold; }},
        {"fan-on", "identical", [&](std::size_t i) -> const Evaluation& { return on[i]; },
         [&](std::size_t i) { return identical[i].threshold; }},
        {"fan-on", "separate", [&](std::size_t i) -> const Evaluation& { return on[n + i]; },
         [&](std::size_t i) { return separate[i].threshold; }},
    };

    std::ostringstream table, per_config;
    table << "config_kind,condition,threshold,n_configs,fpr_mean,fpr_std,fnr_mean,fnr_std,acc_mean,acc_std\n";
    per_config << "config_kind,config_index,config_hex,condition,threshold_kind,threshold,fpr,fnr,acc\n";
    json summary_cells = json::array();
    for (const char* kind : {"random", "optimized"}) {
        const bool optimized = std::string(kind) == "optimized";
        std::vector<std::size_t> members;
        if (optimized) members = {n - 1};
        else {
            members.resize(randoms.size());
            std::iota(members.begin(), members.end(), std::size_t{0});
        }
        for (const auto& cell : cells) {
            std::vector<double> fpr, fnr, acc;
            for (std::size_t i : members) {
                const auto& r = cell.eval(i).report;
                fpr.push_back(r.fpr);
                fnr.push_back(r.fnr);
                acc.push_back(r.balanced_accuracy);
                per_config << kind << ',' << (optimized ? 0 : i) << ',' << candidates[i].to_hex() << ','
                           << cell.condition << ',' << cell.threshold << ',' << format_double(cell.thr(i)) << ','
                           << format_double(r.fpr) << ',' << format_double(r.fnr) << ','
                           << format_double(r.balanced_accuracy) << '\n';
            }
            table << kind << ',' << cell.condition << ',' << cell.threshold << ',' << members.size() << ','
                  << format_double(mean_of(fpr)) << ',' << format_double(sample_std(fpr)) << ','
                  << format_double(mean_of(fnr)) << ',' << format_double(sample_std(fnr)) << ','
                  << format_double(mean_of(acc)) << ',' << format_double(sample_std(acc)) << '\n';
            summary_cells.push_back({{"config_kind", kind},
                                     {"condition", cell.condition},
                                     {"threshold", cell.threshold},
                                     {"fpr_mean", mean_of(fpr)},
                                     {"fpr_std", sample_std(fpr)},
                                     {"fnr_mean", mean_of(fnr)},
                                     {"fnr_std", sample_std(fnr)},
                                     {"acc_mean", mean_of(acc)}});
        }
    }
    std::ostringstream trace;
    trace << "generation,best_cost,mean_cost\n";
    for (const auto& t : best.trace)
        trace << t.generation << ',' << format_double(t.best_cost) << ',' << format_double(t.mean_cost) << '\n';

    RunWriter writer(config, "fan-study");
    writer.table("", table.str());
    writer.table("configs", per_config.str());
    writer.table("optimizer_trace", trace.str());
    return writer.finish({{"band", band_json(band)},
                          {"metric", to_string(metric)},
                          {"optimized_config", best.best.to_hex()},
                          {"optimized_cost", best.best_cost},
                          {"cells", summary_cells}});
}

RunOutput run_named(const std::string& runner, const ScenarioConfig& config) {
    if (runner == "bandwidth-sweep") return run_bandwidth_sweep(config);
    if (runner == "ris-study") return run_ris_study(config);
    if (runner == "variance-profile") return run_variance_profile(config);
    if (runner == "attack") return run_attack_study(config);
    if (runner == "fan-study") return run_fan_study(config);
    throw ConfigError("unknown runner '" + runner + "'");
}

}  // namespace atr
