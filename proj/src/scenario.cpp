#include "atr/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "atr/adversary.hpp"
#include "atr/response_io.hpp"
#include "atr/seeding.hpp"

namespace atr {

using nlohmann::json;

namespace {

json number(double v) {
    if (std::isnan(v)) throw ConfigError("cannot serialize NaN");
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json band_width(double v) { return std::isinf(v) && v > 0 ? json("full") : number(v); }

json vec3(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json complex_pair(cplx c) { return json::array({c.real(), c.imag()}); }

// Walks one JSON object, remembering which keys were consumed so that typos fail loudly.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            read(j_.at(key), out);
        } catch (const json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        } catch (const ConfigError& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    template <class F>
    void object(const char* key, F&& fn) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        Reader sub(j_.at(key), where_ + "." + key);
        fn(sub);
        sub.finish();
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

private:
    static void read(const json& v, double& out) {
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "inf" || s == "full") out = std::numeric_limits<double>::infinity();
            else if (s == "-inf") out = -std::numeric_limits<double>::infinity();
            else throw ConfigError("expected a number, got '" + s + "'");
            return;
        }
        if (!v.is_number()) throw ConfigError("expected a number");
        out = v.get<double>();
    }
    static void read(const json& v, std::uint64_t& out) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw ConfigError("expected a non-negative integer");
        out = v.get<std::uint64_t>();
    }
    static void read(const json& v, unsigned& out) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw ConfigError("expected a non-negative integer");
        out = v.get<unsigned>();
    }
    static void read(const json& v, int& out) {
        if (!v.is_number_integer()) throw ConfigError("expected an integer");
        out = v.get<int>();
    }
    static void read(const json& v, bool& out) {
        if (!v.is_boolean()) throw ConfigError("expected true or false");
        out = v.get<bool>();
    }
    static void read(const json& v, std::string& out) {
        if (!v.is_string()) throw ConfigError("expected a string");
        out = v.get<std::string>();
    }
    static void read(const json& v, Vec3& out) {
        if (!v.is_array() || v.size() != 3) throw ConfigError("expected [x, y, z]");
        read(v[0], out.x);
        read(v[1], out.y);
        read(v[2], out.z);
    }
    static void read(const json& v, cplx& out) {
        if (!v.is_array() || v.size() != 2) throw ConfigError("expected [re, im]");
        double re = 0.0, im = 0.0;
        read(v[0], re);
        read(v[1], im);
        out = {re, im};
    }
    static void read(const json& v, std::vector<double>& out) {
        if (!v.is_array()) throw ConfigError("expected an array");
        out.assign(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) read(v[i], out[i]);
    }
    static void read(const json& v, std::vector<std::string>& out) {
        if (!v.is_array()) throw ConfigError("expected an array");
        out.assign(v.size(), {});
        for (std::size_t i = 0; i < v.size(); ++i) read(v[i], out[i]);
    }
    static void read(const json& v, std::vector<std::pair<double, double>>& out) {
        if (!v.is_array()) throw ConfigError("expected an array of [fc, bw] pairs");
        out.assign(v.size(), {});
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_array() || v[i].size() != 2) throw ConfigError("expected [fc, bw]");
            read(v[i][0], out[i].first);
            read(v[i][1], out[i].second);
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

json bandwidth_list(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) out.push_back(band_width(v));
    return out;
}

json number_list(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) out.push_back(number(v));
    return out;
}

}  // namespace

ScaleProfile parse_profile(const std::string& name) {
    if (name == "desk") return ScaleProfile::Desk;
    if (name == "paper") return ScaleProfile::Paper;
    throw ConfigError("unknown profile '" + name + "' (expected desk or paper)");
}

ScenarioConfig ScenarioConfig::defaults(const std::string& profile) {
    ScenarioConfig c;
    c.profile = profile;
    c.scene = default_scene_params(parse_profile(profile));
    if (parse_profile(profile) == ScaleProfile::Paper) {
        c.detection.random_configs = 50;
        c.detection.center_frequencies_hz = {4.0e9, 5.0e9, 6.5e9, 8.0e9};
        c.detection.out_of_band_fc_hz = 8.0e9;
        c.ris_study.center_frequencies_hz = {4.79e9, 5.0e9, 5.2e9};
        c.attack.center_frequencies_hz = {5.0e9, 8.0e9};
        c.variance.configs = 100;
    }
    return c;
}

void ScenarioConfig::validate() const {
    parse_profile(profile);
    if (workers == 0) throw ConfigError("workers must be at least 1");
    const auto grid = scene.grid.grid();
    auto check_band = [&](double fc, double bw, const char* what) {
        if (std::isinf(bw)) return;
        if (!(bw > 0.0)) throw ConfigError(std::string(what) + ": bandwidth must be positive");
        try {
            (void)band_indices(grid, BandSelection{fc, bw});
        } catch (const Error& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    };
    if (detection.bandwidths_hz.empty() || detection.center_frequencies_hz.empty())
        throw ConfigError("detection: bandwidth and center frequency lists must be non-empty");
    if (detection.metric != "auto") parse_metric(detection.metric);
    if (detection.random_configs == 0) throw ConfigError("detection.random_configs must be positive");
    if (detection.calibration_snapshots == 0) throw ConfigError("detection.calibration_snapshots must be positive");
    if (!(detection.calibration_margin >= 1.0)) throw ConfigError("detection.calibration_margin must be >= 1");
    if (detection.depths_m.empty()) throw ConfigError("detection.depths_m must be non-empty");
    for (double d : detection.depths_m) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("detection.depths_m: depths must be finite and >= 0");
    }
    for (double bw : detection.bandwidths_hz) {
        if (!std::isinf(bw) && !(bw > 0.0)) throw ConfigError("detection.bandwidths_hz: bandwidths must be positive");
    }
    for (const auto& [fc, bw] : detection.map_pairs) check_band(fc, bw, "detection.map_pairs");
    for (double fc : ris_study.center_frequencies_hz) check_band(fc, ris_study.bandwidth_hz, "ris_study");
    if (variance.configs == 0) throw ConfigError("variance.configs must be positive");
    for (const auto& s : attack.strategies) parse_strategy(s);
    if (attack.pool_size == 0) throw ConfigError("attack.pool_size must be positive");
    if (!(attack.replica_perturbation >= 0.0)) throw ConfigError("attack.replica_perturbation must be >= 0");
    check_band(fan_study.center_hz, fan_study.bandwidth_hz, "fan_study");
    if (fan_study.calibration_snapshots == 0) throw ConfigError("fan_study.calibration_snapshots must be positive");
    if (fan_study.optimizer_snapshots < 2) throw ConfigError("fan_study.optimizer_snapshots must be at least 2");
    if (optimizer.population < 2 || optimizer.generations < 1)
        throw ConfigError("optimizer: population >= 2 and generations >= 1 required");
    if (!(optimizer.elite_fraction > 0.0 && optimizer.elite_fraction < 1.0))
        throw ConfigError("optimizer.elite_fraction must lie in (0, 1)");
    if (!(optimizer.p_min >= 0.0 && optimizer.p_min < 0.5)) throw ConfigError("optimizer.p_min must lie in [0, 0.5)");
    build_enclosure();
}

OptimizerParams ScenarioConfig::optimizer_params(std::uint64_t seed_value) const {
    OptimizerParams p;
    p.population = optimizer.population;
    p.elite_fraction = optimizer.elite_fraction;
    p.generations = optimizer.generations;
    p.p_min = optimizer.p_min;
    p.seed = seed_value;
    p.workers = workers;
    return p;
}

CalibrationSpec ScenarioConfig::calibration(std::size_t snapshots) const {
    CalibrationSpec c;
    c.snapshots = snapshots;
    c.t_start_s = 0.0;
    c.t_step_s = detection.calibration_t_step_s;
    c.noise = NoiseSpec{detection.snr_db, derive_seed(seed, "calibration-noise")};
    c.margin = detection.calibration_margin;
    return c;
}

TrialSpec ScenarioConfig::trials(const std::vector<std::size_t>& holes) const {
    TrialSpec t;
    t.holes = holes;
    t.depths_m = detection.depths_m;
    t.noise = NoiseSpec{detection.snr_db, derive_seed(seed, "trial-noise")};
    t.t_start_s = detection.trial_t_start_s;
    t.t_step_s = detection.trial_t_step_s;
    t.seed = derive_seed(seed, "trials");
    return t;
}

json to_json(const ScenarioConfig& c) {
    const auto& s = c.scene;
    json scene = {
        {"grid", {{"f_start_hz", s.grid.f_start_hz}, {"f_step_hz", s.grid.f_step_hz}, {"n_points", s.grid.n_points}}},
        {"box_dims_m", vec3(s.box_dims)},
        {"tx_m", vec3(s.tx)},
        {"rx_m", vec3(s.rx)},
        {"scatterer_count", s.scatterer_count},
        {"scatterer_amplitude_min", s.scatterer_amplitude_min},
        {"scene_seed", s.scene_seed},
        {"ris",
         {{"rows", s.ris.rows},
          {"cols", s.ris.cols},
          {"pitch_m", s.ris.pitch_m},
          {"center_m", vec3(s.ris.center)},
          {"row_dir", vec3(s.ris.row_dir)},
          {"col_dir", vec3(s.ris.col_dir)},
          {"element_gain", complex_pair(s.ris.element_gain)},
          {"efficiency_center_hz", s.ris.efficiency.center_hz},
          {"efficiency_width_hz", s.ris.efficiency.width_hz}}},
        {"holes",
         {{"nx", s.holes.nx}, {"ny", s.holes.ny}, {"margin_m", s.holes.margin_m}, {"depth_limit_m", s.holes.depth_limit_m}}},
        {"fan",
         {{"present", s.fan.present},
          {"hub_m", vec3(s.fan.hub)},
          {"axis", vec3(s.fan.axis)},
          {"blade_count", s.fan.blade_count},
          {"blade_radius_m", s.fan.blade_radius_m},
          {"angular_rate_rad_s", s.fan.angular_rate_rad_s},
          {"amplitude_factor", s.fan.amplitude_factor}}},
        {"needle_step_m", s.needle_step_m},
        {"second_order_coupling", s.second_order_coupling},
    };
    json map_pairs = json::array();
    for (const auto& [fc, bw] : c.detection.map_pairs) map_pairs.push_back(json::array({number(fc), band_width(bw)}));
    const auto& d = c.detection;
    json detection = {
        {"in_band_fc_hz", d.in_band_fc_hz},
        {"out_of_band_fc_hz", d.out_of_band_fc_hz},
        {"bandwidths_hz", bandwidth_list(d.bandwidths_hz)},
        {"center_frequencies_hz", number_list(d.center_frequencies_hz)},
        {"map_pairs", map_pairs},
        {"metric", d.metric},
        {"random_configs", d.random_configs},
        {"calibration_snapshots", d.calibration_snapshots},
        {"calibration_t_step_s", d.calibration_t_step_s},
        {"calibration_margin", d.calibration_margin},
        {"snr_db", number(d.snr_db)},
        {"depths_m", number_list(d.depths_m)},
        {"trial_t_start_s", d.trial_t_start_s},
        {"trial_t_step_s", d.trial_t_step_s},
    };
    return {
        {"profile", c.profile},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"workers", c.workers},
        {"scene", scene},
        {"detection", detection},
        {"ris_study",
         {{"center_frequencies_hz", number_list(c.ris_study.center_frequencies_hz)},
          {"bandwidth_hz", c.ris_study.bandwidth_hz}}},
        {"variance", {{"configs", c.variance.configs}}},
        {"attack",
         {{"strategies", c.attack.strategies},
          {"pool_size", c.attack.pool_size},
          {"replica_perturbation", c.attack.replica_perturbation},
          {"bandwidths_hz", bandwidth_list(c.attack.bandwidths_hz)},
          {"center_frequencies_hz", number_list(c.attack.center_frequencies_hz)}}},
        {"fan_study",
         {{"center_hz", c.fan_study.center_hz},
          {"bandwidth_hz", c.fan_study.bandwidth_hz},
          {"calibration_snapshots", c.fan_study.calibration_snapshots},
          {"optimizer_snapshots", c.fan_study.optimizer_snapshots},
          {"optimizer_t_step_s", c.fan_study.optimizer_t_step_s},
          {"optimizer_snr_db", number(c.fan_study.optimizer_snr_db)}}},
        {"optimizer",
         {{"population", c.optimizer.population},
          {"elite_fraction", c.optimizer.elite_fraction},
          {"generations", c.optimizer.generations},
          {"p_min", c.optimizer.p_min}}},
    };
}

ScenarioConfig scenario_from_json(const json& input, ScenarioConfig c) {
    const json& j = input.is_object() && input.contains("config") ? input.at("config") : input;
    Reader r(j, "scenario");
    r.get("profile", c.profile);
    r.get("seed", c.seed);
    r.get("output_dir", c.output_dir);
    r.get("workers", c.workers);
    r.object("scene", [&](Reader& s) {
        auto& p = c.scene;
        s.object("grid", [&](Reader& g) {
            g.get("f_start_hz", p.grid.f_start_hz);
            g.get("f_step_hz", p.grid.f_step_hz);
            g.get("n_points", p.grid.n_points);
        });
        s.get("box_dims_m", p.box_dims);
        s.get("tx_m", p.tx);
        s.get("rx_m", p.rx);
        s.get("scatterer_count", p.scatterer_count);
        s.get("scatterer_amplitude_min", p.scatterer_amplitude_min);
        s.get("scene_seed", p.scene_seed);
        s.object("ris", [&](Reader& x) {
            x.get("rows", p.ris.rows);
            x.get("cols", p.ris.cols);
            x.get("pitch_m", p.ris.pitch_m);
            x.get("center_m", p.ris.center);
            x.get("row_dir", p.ris.row_dir);
            x.get("col_dir", p.ris.col_dir);
            x.get("element_gain", p.ris.element_gain);
            x.get("efficiency_center_hz", p.ris.efficiency.center_hz);
            x.get("efficiency_width_hz", p.ris.efficiency.width_hz);
        });
        s.object("holes", [&](Reader& x) {
            x.get("nx", p.holes.nx);
            x.get("ny", p.holes.ny);
            x.get("margin_m", p.holes.margin_m);
            x.get("depth_limit_m", p.holes.depth_limit_m);
        });
        s.object("fan", [&](Reader& x) {
            x.get("present", p.fan.present);
            x.get("hub_m", p.fan.hub);
            x.get("axis", p.fan.axis);
            x.get("blade_count", p.fan.blade_count);
            x.get("blade_radius_m", p.fan.blade_radius_m);
            x.get("angular_rate_rad_s", p.fan.angular_rate_rad_s);
            x.get("amplitude_factor", p.fan.amplitude_factor);
        });
        s.get("needle_step_m", p.needle_step_m);
        s.get("second_order_coupling", p.second_order_coupling);
    });
    r.object("detection", [&](Reader& x) {
        auto& d = c.detection;
        x.get("in_band_fc_hz", d.in_band_fc_hz);
        x.get("out_of_band_fc_hz", d.out_of_band_fc_hz);
        x.get("bandwidths_hz", d.bandwidths_hz);
        x.get("center_frequencies_hz", d.center_frequencies_hz);
        x.get("map_pairs", d.map_pairs);
        x.get("metric", d.metric);
        x.get("random_configs", d.random_configs);
        x.get("calibration_snapshots", d.calibration_snapshots);
        x.get("calibration_t_step_s", d.calibration_t_step_s);
        x.get("calibration_margin", d.calibration_margin);
        x.get("snr_db", d.snr_db);
        x.get("depths_m", d.depths_m);
        x.get("trial_t_start_s", d.trial_t_start_s);
        x.get("trial_t_step_s", d.trial_t_step_s);
    });
    r.object("ris_study", [&](Reader& x) {
        x.get("center_frequencies_hz", c.ris_study.center_frequencies_hz);
        x.get("bandwidth_hz", c.ris_study.bandwidth_hz);
    });
    r.object("variance", [&](Reader& x) { x.get("configs", c.variance.configs); });
    r.object("attack", [&](Reader& x) {
        x.get("strategies", c.attack.strategies);
        x.get("pool_size", c.attack.pool_size);
        x.get("replica_perturbation", c.attack.replica_perturbation);
        x.get("bandwidths_hz", c.attack.bandwidths_hz);
        x.get("center_frequencies_hz", c.attack.center_frequencies_hz);
    });
    r.object("fan_study", [&](Reader& x) {
        auto& f = c.fan_study;
        x.get("center_hz", f.center_hz);
        x.get("bandwidth_hz", f.bandwidth_hz);
        x.get("calibration_snapshots", f.calibration_snapshots);
        x.get("optimizer_snapshots", f.optimizer_snapshots);
        x.get("optimizer_t_step_s", f.optimizer_t_step_s);
        x.get("optimizer_snr_db", f.optimizer_snr_db);
    });
    r.object("optimizer", [&](Reader& x) {
        x.get("population", c.optimizer.population);
        x.get("elite_fraction", c.optimizer.elite_fraction);
        x.get("generations", c.optimizer.generations);
        x.get("p_min", c.optimizer.p_min);
    });
    r.finish();
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const std::string& profile) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file " + path.string() + ": " + e.what());
    }
    const json& body = j.is_object() && j.contains("config") ? j.at("config") : j;
    std::string name = profile;
    if (body.is_object() && body.contains("profile") && body.at("profile").is_string())
        name = body.at("profile").get<std::string>();
    auto config = scenario_from_json(j, ScenarioConfig::defaults(name));
    config.validate();
    return config;
}

void save_profile(const DetectionProfile& profile, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json refs = json::array();
    std::size_t i = 0;
    for (const auto& [config, reference] : profile.references) {
        const std::string file = "reference_" + std::to_string(i++) + ".atrh";
        io::save(dir / file, reference);
        refs.push_back({{"config", config.to_bit_string()}, {"file", file}});
    }
    const auto& cal = profile.provenance.calibration;
    json j = {
        {"band", {{"center_hz", profile.band.center_hz}, {"bandwidth_hz", profile.band.bandwidth_hz}}},
        {"metric", to_string(profile.metric)},
        {"metric_formula", metric_formula(profile.metric)},
        {"threshold", profile.threshold},
        {"provenance",
         {{"label", profile.provenance.label},
          {"max_calibration_distance", profile.provenance.max_calibration_distance},
          {"snapshots", cal.snapshots},
          {"t_start_s", cal.t_start_s},
          {"t_step_s", cal.t_step_s},
          {"snr_db", number(cal.noise.snr_db)},
          {"noise_seed", cal.noise.rng_seed},
          {"fan_on", cal.fan_on},
          {"margin", cal.margin}}},
        {"calibration_distances", profile.calibration_distances},
        {"references", refs},
    };
    std::ofstream out(dir / "profile.json");
    out << j.dump(2) << '\n';
    if (!out) throw Error("failed to write " + (dir / "profile.json").string());
}

DetectionProfile load_profile(const std::filesystem::path& dir) {
    std::ifstream in(dir / "profile.json");
    if (!in) throw ConfigError("cannot open " + (dir / "profile.json").string());
    try {
        const json j = json::parse(in);
        DetectionProfile p;
        p.band = {j.at("band").at("center_hz").get<double>(), j.at("band").at("bandwidth_hz").get<double>()};
        p.metric = parse_metric(j.at("metric").get<std::string>());
        p.threshold = j.at("threshold").get<double>();
        const auto& prov = j.at("provenance");
        p.provenance.label = prov.at("label").get<std::string>();
        p.provenance.max_calibration_distance = prov.at("max_calibration_distance").get<double>();
        auto& cal = p.provenance.calibration;
        cal.snapshots = prov.at("snapshots").get<std::size_t>();
        cal.t_start_s = prov.at("t_start_s").get<double>();
        cal.t_step_s = prov.at("t_step_s").get<double>();
        const auto& snr = prov.at("snr_db");
        cal.noise.snr_db = snr.is_string() ? std::numeric_limits<double>::infinity() : snr.get<double>();
        cal.noise.rng_seed = prov.at("noise_seed").get<std::uint64_t>();
        cal.fan_on = prov.at("fan_on").get<bool>();
        cal.margin = prov.at("margin").get<double>();
        p.calibration_distances = j.at("calibration_distances").get<std::vector<double>>();
        for (const auto& ref : j.at("references")) {
            const auto bits = ref.at("config").get<std::string>();
            p.references.emplace(RisConfig::parse(bits, bits.size()), io::load(dir / ref.at("file").get<std::string>()));
        }
        if (p.references.empty()) throw ConfigError("profile has no references");
        return p;
    } catch (const json::exception& e) {
        throw ConfigError("malformed profile.json: " + std::string(e.what()));
    }
}

}  // namespace atr
