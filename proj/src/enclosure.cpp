#include "atr/enclosure.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "atr/seeding.hpp"

namespace atr {

namespace {

constexpr std::size_t kReanchorInterval = 128;

void require_finite(const Vec3& v, const char* what) {
    if (!v.finite()) throw NonFiniteGeometry(std::string("non-finite position: ") + what);
}

double checked_length(const Vec3& a, const Vec3& b) {
    const double d = distance(a, b);
    if (!(d > 0.0) || !std::isfinite(d)) throw NonFiniteGeometry("degenerate path segment (zero or non-finite length)");
    return d;
}

void check_tamper(const Enclosure& enclosure, const TamperSpec& tamper) {
    if (tamper.hole_index >= enclosure.holes.size())
        throw InvalidHoleIndex("hole index " + std::to_string(tamper.hole_index) + " outside hole grid of " +
                               std::to_string(enclosure.holes.size()));
    if (!std::isfinite(tamper.depth_m) || tamper.depth_m < 0.0)
        throw ConfigError("tamper depth must be finite and non-negative");
    if (!std::isfinite(tamper.needle_amplitude.real()) || !std::isfinite(tamper.needle_amplitude.imag()))
        throw ConfigError("needle amplitude must be finite");
}

}  // namespace

double EfficiencyProfile::operator()(double f_hz) const noexcept {
    const double offset = std::abs(f_hz - center_hz);
    if (!(width_hz > 0.0) || offset >= width_hz) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * offset / width_hz));
}

std::vector<Vec3> FanRotor::blade_tips(double time_s) const {
    const Vec3 n = axis.normalized();
    const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 u = n.cross(helper).normalized();
    const Vec3 v = n.cross(u);
    std::vector<Vec3> tips;
    tips.reserve(static_cast<std::size_t>(std::max(blade_count, 0)));
    for (int b = 0; b < blade_count; ++b) {
        const double theta = initial_angle_rad + angular_rate_rad_s * time_s +
                             2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(blade_count);
        tips.push_back(hub + u * (blade_radius_m * std::cos(theta)) + v * (blade_radius_m * std::sin(theta)));
    }
    return tips;
}

void Enclosure::validate() const {
    require_finite(tx, "tx antenna");
    require_finite(rx, "rx antenna");
    if (tx == rx) throw NonFiniteGeometry("tx and rx antennas coincide");
    for (const auto& s : scatterers) {
        require_finite(s.position, "scatterer");
        if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag()))
            throw NonFiniteGeometry("non-finite scatterer amplitude");
    }
    if (ris.element_gain.size() != ris.element_positions.size())
        throw ConfigError("RIS panel: element_gain count differs from element count");
    for (const auto& p : ris.element_positions) require_finite(p, "RIS element");
    for (const auto& h : holes) {
        require_finite(h.entry, "hole entry");
        require_finite(h.axis, "hole axis");
        if (!(h.axis.norm() > 0.0)) throw NonFiniteGeometry("hole insertion axis has zero length");
    }
    if (fan) {
        require_finite(fan->hub, "fan hub");
        require_finite(fan->axis, "fan axis");
        if (fan->blade_count < 1) throw ConfigError("fan: blade_count must be positive");
        if (!(fan->axis.norm() > 0.0)) throw NonFiniteGeometry("fan axis has zero length");
        if (!std::isfinite(fan->blade_radius_m) || !std::isfinite(fan->angular_rate_rad_s))
            throw NonFiniteGeometry("fan: non-finite radius or rate");
    }
    if (!(needle_step_m > 0.0)) throw ConfigError("needle step must be positive");
    if (!std::isfinite(second_order_coupling) || !std::isfinite(path_gain))
        throw ConfigError("non-finite coupling or path gain");
}

Enclosure with_fan_stopped(Enclosure enclosure) {
    if (enclosure.fan) enclosure.fan->angular_rate_rad_s = 0.0;
    return enclosure;
}

Enclosure with_inert_ris(Enclosure enclosure) {
    std::fill(enclosure.ris.element_gain.begin(), enclosure.ris.element_gain.end(), cplx{0.0, 0.0});
    return enclosure;
}

std::vector<Vec3> needle_points(const Enclosure& enclosure, const TamperSpec& tamper) {
    check_tamper(enclosure, tamper);
    if (tamper.depth_m == 0.0) return {};
    const double ratio = tamper.depth_m / enclosure.needle_step_m;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
    const auto& hole = enclosure.holes[tamper.hole_index];
    const Vec3 axis = hole.axis.normalized();
    const double segment = tamper.depth_m / static_cast<double>(n);
    std::vector<Vec3> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(hole.entry + axis * ((static_cast<double>(i) + 0.5) * segment));
    return points;
}

double median_scatterer_magnitude(const Enclosure& enclosure) {
    if (enclosure.scatterers.empty()) return 0.0;
    std::vector<double> mags;
    mags.reserve(enclosure.scatterers.size());
    for (const auto& s : enclosure.scatterers) mags.push_back(std::abs(s.amplitude));
    std::sort(mags.begin(), mags.end());
    const std::size_t n = mags.size();
    return n % 2 ? mags[n / 2] : 0.5 * (mags[n / 2 - 1] + mags[n / 2]);
}

cplx default_needle_amplitude(const Enclosure& enclosure) { return {0.05 * median_scatterer_magnitude(enclosure), 0.0}; }

PathCounts count_paths(const Enclosure& enclosure, const std::optional<TamperSpec>& tamper) {
    PathCounts counts;
    counts.scatterer_paths = enclosure.scatterers.size();
    counts.ris_paths = enclosure.ris.size();
    if (tamper) {
        counts.needle_paths = needle_points(enclosure, *tamper).size();
        if (enclosure.second_order_coupling != 0.0) counts.coupling_paths = 2 * counts.needle_paths * counts.ris_paths;
    }
    if (enclosure.fan) counts.fan_paths = static_cast<std::size_t>(enclosure.fan->blade_count);
    return counts;
}

void accumulate_path(std::span<cplx> out, const FrequencyGrid& grid, cplx amplitude, double length_m,
                     std::span<const double> weight) {
    const double tau = length_m / kSpeedOfLight;
    const double step_phase = -2.0 * std::numbers::pi * grid.f_step() * tau;
    const cplx rotation = std::polar(1.0, step_phase);
    const std::size_t n = out.size();
    cplx phasor;
    for (std::size_t k = 0; k < n; ++k) {
        if (k % kReanchorInterval == 0) {
            // exact re-anchor; phase reduced modulo 2 pi in the delay domain for accuracy
            const double cycles = grid.frequency(k) * tau;
            const double frac = cycles - std::floor(cycles);
            phasor = amplitude * std::polar(1.0, -2.0 * std::numbers::pi * frac);
        }
        out[k] += weight.empty() ? phasor : phasor * weight[k];
        phasor *= rotation;
    }
}

void add_noise(std::span<cplx> samples, const NoiseSpec& noise) {
    if (noise.is_noiseless() || samples.empty()) return;
    if (!std::isfinite(noise.snr_db)) throw ConfigError("noise: SNR must be finite or +inf");
    double power = 0.0;
    for (const auto& s : samples) power += std::norm(s);
    power /= static_cast<double>(samples.size());
    const double sigma = std::sqrt(0.5 * power * std::pow(10.0, -noise.snr_db / 10.0));
    Rng rng(noise.rng_seed);
    for (auto& s : samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        s += cplx(sigma * re, sigma * im);
    }
}

SceneBasis::SceneBasis(Enclosure enclosure) : enclosure_(std::move(enclosure)) {
    enclosure_.validate();
    const auto& grid = enclosure_.grid;
    const std::size_t n = grid.size();
    const double gamma = enclosure_.path_gain;

    efficiency_.resize(n);
    for (std::size_t k = 0; k < n; ++k) efficiency_[k] = enclosure_.ris.efficiency(grid.frequency(k));

    static_.assign(n, cplx{});
    {
        const double d = checked_length(enclosure_.tx, enclosure_.rx);
        accumulate_path(static_, grid, cplx(gamma / d, 0.0), d);
    }
    for (const auto& s : enclosure_.scatterers) {
        const double d1 = checked_length(enclosure_.tx, s.position);
        const double d2 = checked_length(s.position, enclosure_.rx);
        accumulate_path(static_, grid, gamma * s.amplitude / (d1 * d2), d1 + d2);
    }

    const std::size_t L = enclosure_.ris.size();
    ris_columns_.assign(L * n, cplx{});
    for (std::size_t l = 0; l < L; ++l) {
        const auto& p = enclosure_.ris.element_positions[l];
        const double d1 = checked_length(enclosure_.tx, p);
        const double d2 = checked_length(p, enclosure_.rx);
        std::span<cplx> column(ris_columns_.data() + l * n, n);
        accumulate_path(column, grid, gamma * enclosure_.ris.element_gain[l] / (d1 * d2), d1 + d2, efficiency_);
    }
}

std::span<const cplx> SceneBasis::ris_column(std::size_t l) const noexcept {
    const std::size_t n = grid().size();
    return {ris_columns_.data() + l * n, n};
}

void SceneBasis::check_config(const RisConfig& config) const {
    if (config.size() != ris_size())
        throw ConfigLengthMismatch("RIS configuration has " + std::to_string(config.size()) +
                                   " bits, scene has " + std::to_string(ris_size()) + " elements");
}

std::vector<cplx> SceneBasis::ris_sum(const RisConfig& config) const {
    check_config(config);
    const std::size_t n = grid().size();
    std::vector<cplx> out(n);
    for (std::size_t l = 0; l < ris_size(); ++l) {
        const cplx* col = ris_columns_.data() + l * n;
        if (config.bit(l)) {
            for (std::size_t k = 0; k < n; ++k) out[k] -= col[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) out[k] += col[k];
        }
    }
    return out;
}

std::vector<cplx> SceneBasis::fan_part(double time_s) const {
    if (!enclosure_.fan) return {};
    std::vector<cplx> out(grid().size());
    const auto& fan = *enclosure_.fan;
    for (const auto& tip : fan.blade_tips(time_s)) {
        const double d1 = checked_length(enclosure_.tx, tip);
        const double d2 = checked_length(tip, enclosure_.rx);
        accumulate_path(out, grid(), enclosure_.path_gain * fan.blade_amplitude / (d1 * d2), d1 + d2);
    }
    return out;
}

TamperBasis::TamperBasis(const SceneBasis& scene, const TamperSpec& tamper) : tamper_(tamper) {
    const auto& enc = scene.enclosure();
    const auto& grid = scene.grid();
    const std::size_t n = grid.size();
    n_bins_ = n;
    const double gamma = enc.path_gain;
    const auto points = needle_points(enc, tamper);

    needle_.assign(n, cplx{});
    for (const auto& p : points) {
        const double d1 = checked_length(enc.tx, p);
        const double d2 = checked_length(p, enc.rx);
        accumulate_path(needle_, grid, gamma * tamper.needle_amplitude / (d1 * d2), d1 + d2);
    }

    const double kappa = enc.second_order_coupling;
    const std::size_t L = enc.ris.size();
    if (kappa == 0.0 || points.empty() || L == 0) return;
    coupling_columns_.assign(L * n, cplx{});
    const auto eff = scene.efficiency();
    for (std::size_t l = 0; l < L; ++l) {
        const auto& e = enc.ris.element_positions[l];
        const cplx base = gamma * kappa * tamper.needle_amplitude * enc.ris.element_gain[l];
        std::span<cplx> column(coupling_columns_.data() + l * n, n);
        const double tx_e = checked_length(enc.tx, e);
        const double e_rx = checked_length(e, enc.rx);
        for (const auto& p : points) {
            const double tx_p = checked_length(enc.tx, p);
            const double p_rx = checked_length(p, enc.rx);
            const double p_e = checked_length(p, e);
            // tx -> needle -> element -> rx
            accumulate_path(column, grid, base / (tx_p * p_e * e_rx), tx_p + p_e + e_rx, eff);
            // tx -> element -> needle -> rx
            accumulate_path(column, grid, base / (tx_e * p_e * p_rx), tx_e + p_e + p_rx, eff);
        }
    }
}

std::vector<cplx> TamperBasis::imprint(const RisConfig& config) const {
    std::vector<cplx> out(needle_);
    if (coupling_columns_.empty()) return out;
    const std::size_t L = coupling_columns_.size() / n_bins_;
    if (config.size() != L)
        throw ConfigLengthMismatch("RIS configuration has " + std::to_string(config.size()) +
                                   " bits, scene has " + std::to_string(L) + " elements");
    for (std::size_t l = 0; l < L; ++l) {
        const cplx* col = coupling_columns_.data() + l * n_bins_;
        if (config.bit(l)) {
            for (std::size_t k = 0; k < n_bins_; ++k) out[k] -= col[k];
        } else {
            for (std::size_t k = 0; k < n_bins_; ++k) out[k] += col[k];
        }
    }
    return out;
}

std::vector<cplx> Bench::configured(const RisConfig& config) const {
    auto out = scene_.ris_sum(config);
    const auto st = scene_.static_part();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = st[k] + out[k];
    return out;
}

ChannelResponse Bench::assemble(std::span<const cplx> configured, const std::vector<cplx>* tamper_part,
                                const std::vector<cplx>* fan_part, const NoiseSpec& noise) const {
    std::vector<cplx> h(configured.begin(), configured.end());
    if (tamper_part) {
        for (std::size_t k = 0; k < h.size(); ++k) h[k] += (*tamper_part)[k];
    }
    if (fan_part && !fan_part->empty()) {
        for (std::size_t k = 0; k < h.size(); ++k) h[k] += (*fan_part)[k];
    }
    add_noise(h, noise);
    return ChannelResponse(scene_.grid(), std::move(h));
}

ChannelResponse Bench::measure(std::span<const cplx> configured, const std::vector<cplx>* tamper_part,
                               double time_s, const NoiseSpec& noise) const {
    if (!enclosure().fan) return assemble(configured, tamper_part, nullptr, noise);
    const auto fan = scene_.fan_part(time_s);
    return assemble(configured, tamper_part, &fan, noise);
}

ChannelResponse Bench::measure(const RisConfig& config, const TamperBasis* tamper, double time_s,
                               const NoiseSpec& noise) const {
    const auto base = configured(config);
    if (!tamper) return measure(base, nullptr, time_s, noise);
    const auto part = tamper->imprint(config);
    return measure(base, &part, time_s, noise);
}

ChannelResponse synthesize(const Enclosure& enclosure, const RisConfig& config,
                           const std::optional<TamperSpec>& tamper, double time_s, const NoiseSpec& noise) {
    Bench bench(enclosure);
    bench.scene().check_config(config);
    if (!tamper) return bench.measure(config, nullptr, time_s, noise);
    TamperBasis tb(bench.scene(), *tamper);
    return bench.measure(config, &tb, time_s, noise);
}

ChannelResponse imprint(const Enclosure& enclosure, const RisConfig& config, const TamperSpec& tamper,
                        double /*time_s: no time-dependent tamper terms in this model*/) {
    SceneBasis scene(enclosure);
    scene.check_config(config);
    TamperBasis tb(scene, tamper);
    return ChannelResponse(scene.grid(), tb.imprint(config));
}

std::vector<ChannelResponse> time_series(const Enclosure& enclosure, const RisConfig& config,
                                         const std::optional<TamperSpec>& tamper, double t_start_s,
                                         double t_step_s, std::size_t n_snapshots, const NoiseSpec& noise) {
    if (n_snapshots == 0) throw ConfigError("time series: at least one snapshot required");
    Bench bench(enclosure);
    bench.scene().check_config(config);
    const auto base = bench.configured(config);
    std::optional<std::vector<cplx>> part;
    if (tamper) part = TamperBasis(bench.scene(), *tamper).imprint(config);
    std::vector<ChannelResponse> out;
    out.reserve(n_snapshots);
    for (std::size_t k = 0; k < n_snapshots; ++k) {
        const double t = t_start_s + static_cast<double>(k) * t_step_s;
        out.push_back(bench.measure(base, part ? &*part : nullptr, t, noise.reseeded(derive_seed(noise.rng_seed, {k}))));
    }
    return out;
}

}  // namespace atr
