#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "atr/core_types.hpp"

namespace atr {

ATR_DEFINE_ERROR(ConfigLengthMismatch, Error);
ATR_DEFINE_ERROR(InvalidHoleIndex, Error);
ATR_DEFINE_ERROR(NonFiniteGeometry, Error);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const noexcept { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const noexcept { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const noexcept { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
    double norm() const noexcept { return std::sqrt(dot(*this)); }
    Vec3 normalized() const noexcept { return *this * (1.0 / norm()); }
    bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    bool operator==(const Vec3&) const = default;
};

inline double distance(const Vec3& a, const Vec3& b) noexcept { return (a - b).norm(); }

struct Scatterer {
    Vec3 position;
    cplx amplitude;
};

/// Raised-cosine band-pass weighting of the RIS reflection:
/// s(f) = (1 + cos(pi (f - center) / width)) / 2 for |f - center| <= width, else 0.
struct EfficiencyProfile {
    double center_hz = 5.0e9;
    double width_hz = 0.7e9;

    double operator()(double f_hz) const noexcept;
};

struct RisPanel {
    std::vector<Vec3> element_positions;
    std::vector<cplx> element_gain;
    EfficiencyProfile efficiency;

    std::size_t size() const noexcept { return element_positions.size(); }
};

/// Needle insertion site: entry point on the lid and unit insertion direction.
struct HoleSite {
    Vec3 entry;
    Vec3 axis{0.0, 0.0, -1.0};
};

struct FanRotor {
    Vec3 hub;
    Vec3 axis{0.0, 0.0, 1.0};  // rotation axis; blades sweep the plane normal to it
    int blade_count = 3;
    double blade_radius_m = 0.04;
    double angular_rate_rad_s = 2.0 * 3.141592653589793 * 20.0;
    cplx blade_amplitude{0.0, 0.0};
    double initial_angle_rad = 0.0;

    std::vector<Vec3> blade_tips(double time_s) const;
};

struct TamperSpec {
    std::size_t hole_index = 0;
    double depth_m = 0.0;
    cplx needle_amplitude{0.0, 0.0};
};

struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t rng_seed = 0;

    static NoiseSpec noiseless() noexcept { return {}; }
    bool is_noiseless() const noexcept { return std::isinf(snr_db) && snr_db > 0.0; }
    NoiseSpec reseeded(std::uint64_t seed) const noexcept { return {snr_db, seed}; }
};

struct Enclosure {
    FrequencyGrid grid = FrequencyGrid::instrument_default();
    Vec3 tx;
    Vec3 rx;
    std::vector<Scatterer> scatterers;
    RisPanel ris;
    std::vector<HoleSite> holes;
    std::optional<FanRotor> fan;
    Vec3 box_dims{0.43, 0.43, 0.205};
    double needle_step_m = 0.002;
    /// Weight of the needle <-> RIS two-bounce paths; 0 disables them.
    double second_order_coupling = 0.0;
    /// Path gain reference (meters).
    double path_gain = 1.0;

    /// Throws NonFiniteGeometry / ConfigError on an inconsistent scene.
    void validate() const;
};

/// Copy of the scene with a stationary fan (blades frozen at their initial angle).
Enclosure with_fan_stopped(Enclosure enclosure);
/// Copy of the scene with every RIS element gain set to zero.
Enclosure with_inert_ris(Enclosure enclosure);

/// Point scatterers standing in for an inserted needle: ceil(depth / step) points
/// at the midpoints of equal segments along the insertion axis.
std::vector<Vec3> needle_points(const Enclosure& enclosure, const TamperSpec& tamper);

/// Median |amplitude| of the static scatterers (0 without scatterers).
double median_scatterer_magnitude(const Enclosure& enclosure);
/// 0.05 x median magnitude of the static scatterer amplitudes.
cplx default_needle_amplitude(const Enclosure& enclosure);

struct PathCounts {
    std::size_t line_of_sight = 1;
    std::size_t scatterer_paths = 0;
    std::size_t ris_paths = 0;
    std::size_t needle_paths = 0;
    std::size_t coupling_paths = 0;
    std::size_t fan_paths = 0;
};
PathCounts count_paths(const Enclosure& enclosure, const std::optional<TamperSpec>& tamper);

/// H(f) for the scene, RIS configuration, optional tamper and time, plus AWGN scaled
/// against the mean squared magnitude of the noiseless response over the grid.
ChannelResponse synthesize(const Enclosure& enclosure, const RisConfig& config,
                           const std::optional<TamperSpec>& tamper, double time_s, const NoiseSpec& noise);

/// Noiseless tamper contribution: synthesize(tampered) - synthesize(untampered).
ChannelResponse imprint(const Enclosure& enclosure, const RisConfig& config, const TamperSpec& tamper,
                        double time_s);

/// Snapshots at t_start + k t_step; snapshot k draws noise from derive_seed(noise.rng_seed, {k}).
std::vector<ChannelResponse> time_series(const Enclosure& enclosure, const RisConfig& config,
                                         const std::optional<TamperSpec>& tamper, double t_start_s,
                                         double t_step_s, std::size_t n_snapshots, const NoiseSpec& noise);

/// Adds one propagation path to `out`:
/// amplitude * exp(-j 2 pi f length / c) at every bin, optionally weighted per bin.
void accumulate_path(std::span<cplx> out, const FrequencyGrid& grid, cplx amplitude, double length_m,
                     std::span<const double> weight = {});

/// Adds AWGN in place at the requested SNR (no-op when noiseless).
void add_noise(std::span<cplx> samples, const NoiseSpec& noise);

/// Precomputed linear decomposition of the untampered scene on its grid:
/// H(c, t) = static + sum_l r_l(c) column_l + fan(t).
class SceneBasis {
public:
    explicit SceneBasis(Enclosure enclosure);

    const Enclosure& enclosure() const noexcept { return enclosure_; }
    const FrequencyGrid& grid() const noexcept { return enclosure_.grid; }
    std::size_t ris_size() const noexcept { return enclosure_.ris.size(); }

    std::span<const cplx> static_part() const noexcept { return static_; }
    std::span<const cplx> ris_column(std::size_t l) const noexcept;
    std::span<const double> efficiency() const noexcept { return efficiency_; }

    /// sum_l r_l column_l
    std::vector<cplx> ris_sum(const RisConfig& config) const;
    /// Blade-tip contribution at time t; empty when the scene has no fan.
    std::vector<cplx> fan_part(double time_s) const;

    void check_config(const RisConfig& config) const;

private:
    Enclosure enclosure_;
    std::vector<double> efficiency_;
    std::vector<cplx> static_;
    std::vector<cplx> ris_columns_;  // row-major, ris_size x grid size
};

/// Tamper terms for one TamperSpec: first-order needle paths plus, when coupling is
/// enabled, per-element needle <-> RIS two-bounce columns.
class TamperBasis {
public:
    TamperBasis(const SceneBasis& scene, const TamperSpec& tamper);

    const TamperSpec& tamper() const noexcept { return tamper_; }
    std::span<const cplx> needle_part() const noexcept { return needle_; }
    bool coupled() const noexcept { return !coupling_columns_.empty(); }

    /// needle + sum_l r_l coupling_l
    std::vector<cplx> imprint(const RisConfig& config) const;

private:
    TamperSpec tamper_;
    std::size_t n_bins_ = 0;
    std::vector<cplx> needle_;
    std::vector<cplx> coupling_columns_;
};

/// Fast measurement path shared by the experiment runners. Produces exactly the
/// same values as synthesize() for the same inputs.
class Bench {
public:
    explicit Bench(Enclosure enclosure) : scene_(std::move(enclosure)) {}

    const SceneBasis& scene() const noexcept { return scene_; }
    const Enclosure& enclosure() const noexcept { return scene_.enclosure(); }

    /// Noiseless untampered, fan-free response for `config` (cacheable by the caller).
    std::vector<cplx> configured(const RisConfig& config) const;

    /// Assembles a measurement from a precomputed configured part.
    ChannelResponse measure(std::span<const cplx> configured, const std::vector<cplx>* tamper_part,
                            double time_s, const NoiseSpec& noise) const;

    ChannelResponse measure(const RisConfig& config, const TamperBasis* tamper, double time_s,
                            const NoiseSpec& noise) const;

    /// Same as measure() with the fan contribution supplied by the caller.
    ChannelResponse assemble(std::span<const cplx> configured, const std::vector<cplx>* tamper_part,
                             const std::vector<cplx>* fan_part, const NoiseSpec& noise) const;

private:
    SceneBasis scene_;
};

}  // namespace atr
