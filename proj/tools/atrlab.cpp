#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atr/experiments.hpp"
#include "atr/response_io.hpp"
#include "atr/seeding.hpp"

namespace fs = std::filesystem;
using namespace atr;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string profile = "desk";
    std::optional<std::string> out;
    std::optional<unsigned> workers;
};

ScenarioConfig resolve(const Globals& g) {
    ScenarioConfig c = g.config_path.empty() ? ScenarioConfig::defaults(g.profile) : load_scenario(g.config_path, g.profile);
    if (g.seed) c.seed = *g.seed;
    if (g.out) c.output_dir = *g.out;
    if (g.workers) c.workers = *g.workers;
    c.validate();
    return c;
}

std::optional<TamperSpec> tamper_from(const Enclosure& enc, long hole, double depth) {
    if (hole < 0) return std::nullopt;
    return TamperSpec{static_cast<std::size_t>(hole), depth, default_needle_amplitude(enc)};
}

void describe(const ScenarioConfig& c) {
    const auto enc = c.build_enclosure();
    const auto paths = count_paths(enc, std::nullopt);
    const auto with_needle = count_paths(enc, TamperSpec{0, c.detection.depths_m.front(), {}});
    std::cout << "profile: " << c.profile << "\n"
              << "grid: " << enc.grid.size() << " points, " << io::format_double(enc.grid.f_start()) << " .. "
              << io::format_double(enc.grid.f_last()) << " Hz, step " << io::format_double(enc.grid.f_step()) << " Hz\n"
              << "box_m: " << enc.box_dims.x << " x " << enc.box_dims.y << " x " << enc.box_dims.z << "\n"
              << "tx_m: (" << enc.tx.x << ", " << enc.tx.y << ", " << enc.tx.z << ")  rx_m: (" << enc.rx.x << ", "
              << enc.rx.y << ", " << enc.rx.z << ")\n"
              << "ris elements: " << enc.ris.size() << ", efficiency center " << enc.ris.efficiency.center_hz
              << " Hz, half-width " << enc.ris.efficiency.width_hz << " Hz\n"
              << "second-order coupling: " << enc.second_order_coupling << "\n"
              << "paths: los " << paths.line_of_sight << ", scatterer " << paths.scatterer_paths << ", ris "
              << paths.ris_paths << ", fan " << paths.fan_paths << "\n"
              << "paths with needle at depth " << c.detection.depths_m.front() << " m: needle "
              << with_needle.needle_paths << ", coupling " << with_needle.coupling_paths << "\n"
              << "median scatterer |a|: " << median_scatterer_magnitude(enc) << "\n"
              << "default needle |a|: " << std::abs(default_needle_amplitude(enc)) << "\n";
    if (enc.fan) {
        std::cout << "fan: " << enc.fan->blade_count << " blade(s), radius " << enc.fan->blade_radius_m << " m, rate "
                  << enc.fan->angular_rate_rad_s << " rad/s, |a| " << std::abs(enc.fan->blade_amplitude) << "\n";
    } else {
        std::cout << "fan: none\n";
    }
    std::cout << "holes: " << enc.holes.size() << "\n";
    for (std::size_t i = 0; i < enc.holes.size(); ++i) {
        const auto& h = enc.holes[i];
        std::cout << "  " << i << ": (" << h.entry.x << ", " << h.entry.y << ", " << h.entry.z << ")\n";
    }
}

void write_trace(std::ostream& out, const OptimizeResult& r) {
    out << "generation,best_cost,mean_cost\n";
    for (const auto& t : r.trace)
        out << t.generation << ',' << io::format_double(t.best_cost) << ',' << io::format_double(t.mean_cost) << '\n';
}

void print_run(const RunOutput& r) {
    std::cout << r.runner << ": " << r.dir.string() << "\n";
    for (const auto& f : r.files) std::cout << "  " << f.filename().string() << "\n";
    std::cout << r.summary.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS anti-tamper simulation lab"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Scenario or run manifest (JSON)");
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--profile", g.profile, "Scale profile")->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--workers", g.workers, "Worker threads");

    auto* scene = app.add_subcommand("scene", "Scene inspection");
    scene->require_subcommand(1);
    auto* scene_describe = scene->add_subcommand("describe", "Print the resolved scene");

    std::string ris_text, output, profile_dir, measurement_path, configs_text, metric_text = "auto", cost_name = "mean-amplitude";
    long hole = -1;
    double depth = 0.020, time_s = 0.0, snr_db = std::numeric_limits<double>::infinity();
    double fc = 5.0e9, bw = 20e6;
    std::uint64_t noise_seed = 0;
    std::size_t n_random = 0;

    auto* synth = app.add_subcommand("synthesize", "Synthesize one channel response");
    synth->add_option("--ris", ris_text, "Configuration (bit string or 0x hex)")->required();
    synth->add_option("--hole", hole, "Hole index to tamper (default: untampered)");
    synth->add_option("--depth", depth, "Needle depth in metres");
    synth->add_option("--time", time_s, "Measurement time in seconds");
    synth->add_option("--snr-db", snr_db, "SNR in dB (default: noiseless)");
    synth->add_option("--noise-seed", noise_seed, "Noise seed");
    synth->add_option("-o,--output", output, "Output file (.csv or .atrh)")->required();

    auto* prov = app.add_subcommand("provision", "Provision a detection profile");
    prov->add_option("--configs", configs_text, "Comma-separated configurations");
    prov->add_option("--random", n_random, "Number of seeded random configurations");
    prov->add_option("--fc", fc, "Band center in Hz");
    prov->add_option("--bw", bw, "Bandwidth in Hz");
    prov->add_option("--metric", metric_text, "auto, mnd or euclidean");
    prov->add_option("-o,--output", output, "Profile directory")->required();

    auto* det = app.add_subcommand("detect", "Classify a measurement against a profile");
    det->add_option("--profile-dir", profile_dir, "Provisioned profile directory")->required();
    det->add_option("--measurement", measurement_path, "Measurement file")->required();
    det->add_option("--ris", ris_text, "Configuration active during the measurement")->required();

    auto* opt = app.add_subcommand("optimize", "Search for a low-cost RIS configuration");
    opt->add_option("--cost", cost_name, "mean-amplitude or temporal-std")
        ->check(CLI::IsMember({"mean-amplitude", "temporal-std"}));
    opt->add_option("--fc", fc, "Band center in Hz");
    opt->add_option("--bw", bw, "Bandwidth in Hz");
    opt->add_option("--trace", output, "Trace CSV path (default: stdout)");

    std::vector<std::pair<CLI::App*, std::string>> runners{
        {app.add_subcommand("sweep-bandwidth", "FNR across bandwidths and centers"), "bandwidth-sweep"},
        {app.add_subcommand("study-ris", "Random versus optimized RIS configurations"), "ris-study"},
        {app.add_subcommand("variance-profile", "Per-frequency variance over configurations"), "variance-profile"},
        {app.add_subcommand("attack", "Signal-injection attack study"), "attack"},
        {app.add_subcommand("fan-study", "Moving-fan robustness study"), "fan-study"},
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto config = resolve(g);
        if (scene_describe->parsed()) {
            describe(config);
            return 0;
        }
        if (synth->parsed()) {
            const auto enc = config.build_enclosure();
            const auto c = RisConfig::parse(ris_text, enc.ris.size());
            const auto h = synthesize(enc, c, tamper_from(enc, hole, depth), time_s, NoiseSpec{snr_db, noise_seed});
            io::save(output, h);
            std::cout << "wrote " << output << "\n";
            return 0;
        }
        if (prov->parsed()) {
            const auto enc = config.build_enclosure();
            std::vector<RisConfig> configs;
            std::stringstream ss(configs_text);
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) configs.push_back(RisConfig::parse(item, enc.ris.size()));
            if (n_random > 0) {
                const auto extra = secret_configs(config, n_random, enc.ris.size());
                configs.insert(configs.end(), extra.begin(), extra.end());
            }
            if (configs.empty()) throw ConfigError("provision: give --configs or --random");
            const auto band = resolve_band(enc.grid, fc, bw);
            const Metric metric = metric_text == "auto" ? metric_for_band(band) : parse_metric(metric_text);
            auto cal = config.calibration(config.detection.calibration_snapshots);
            const auto profile = provision(enc, configs, band, metric, cal);
            save_profile(profile, output);
            std::cout << "provisioned " << configs.size() << " configuration(s), metric " << to_string(metric)
                      << ", threshold " << io::format_double(profile.threshold) << "\n";
            return 0;
        }
        if (det->parsed()) {
            const auto profile = load_profile(profile_dir);
            const auto h = io::load(measurement_path);
            const auto c = RisConfig::parse(ris_text, profile.references.begin()->first.size());
            const auto v = detect(profile, h, c);
            std::cout << (v.tampered ? "tampered" : "untampered") << " distance=" << io::format_double(v.distance)
                      << " threshold=" << io::format_double(v.threshold) << "\n";
            return 0;
        }
        if (opt->parsed()) {
            const auto enc = config.build_enclosure();
            const auto band = resolve_band(enc.grid, fc, bw);
            const auto cost = cost_name == "mean-amplitude"
                                  ? cost_mean_amplitude(enc, band,
                                                        NoiseSpec{config.detection.snr_db,
                                                                  derive_seed(config.seed, "cost-noise")})
                                  : cost_temporal_std(enc, band, config.fan_study.optimizer_snapshots,
                                                      config.fan_study.optimizer_t_step_s,
                                                      NoiseSpec{config.fan_study.optimizer_snr_db,
                                                                derive_seed(config.seed, "fan-cost-noise")});
            auto params = config.optimizer_params(derive_seed(config.seed, "optimize"));
            const auto r = optimize(cost, enc.ris.size(), params);
            if (output.empty()) {
                write_trace(std::cout, r);
            } else {
                std::ofstream f(output);
                write_trace(f, r);
            }
            std::cout << "best_cost " << io::format_double(r.best_cost) << "\n"
                      << "bits " << r.best.to_bit_string() << "\n"
                      << "hex " << r.best.to_hex() << "\n";
            return 0;
        }
        for (const auto& [sub, name] : runners) {
            if (sub->parsed()) {
                print_run(run_named(name, config));
                return 0;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
