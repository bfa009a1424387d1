#pragma once

#include <cstdint>
#include <optional>

#include "atr/enclosure.hpp"

namespace atr {

struct GridParams {
    double f_start_hz = 4.0e9;
    double f_step_hz = 1.0e6;
    std::size_t n_points = 2000;

    FrequencyGrid grid() const { return FrequencyGrid(f_start_hz, f_step_hz, n_points); }
};

struct RisLayout {
    std::size_t rows = 8;
    std::size_t cols = 8;
    double pitch_m = 0.022;
    /// Center of the panel and the two in-plane directions it spans.
    Vec3 center{0.004, 0.11, 0.10};
    Vec3 row_dir{0.0, 0.0, 1.0};
    Vec3 col_dir{0.0, 1.0, 0.0};
    cplx element_gain{0.02, 0.0};
    EfficiencyProfile efficiency;
};

struct HoleLayout {
    std::size_t nx = 10;
    std::size_t ny = 5;
    double margin_m = 0.04;
    double depth_limit_m = 0.04;  // needle length
};

struct FanLayout {
    bool present = true;
    Vec3 hub{0.215, 0.33, 0.17};
    Vec3 axis{0.0, 0.0, 1.0};
    int blade_count = 1;
    double blade_radius_m = 0.002;
    double angular_rate_rad_s = 2.0 * 3.141592653589793 * 23.0;
    double amplitude_factor = 2.0;  // blade amplitude relative to the median scatterer
};

/// Needle <-> RIS coupling weight of the default scene. With it the configuration-
/// dependent part of the imprint carries about 20% of the imprint power in band.
inline constexpr double kDefaultCoupling = 0.65;

/// Parameters of the generated default scene. Every field has a unit-bearing name in
/// the scenario file; see scenario.hpp.
struct SceneParams {
    GridParams grid;
    Vec3 box_dims{0.43, 0.43, 0.205};
    Vec3 tx{0.09, 0.12, 0.14};
    Vec3 rx{0.34, 0.31, 0.15};
    std::size_t scatterer_count = 40;
    double scatterer_amplitude_min = 0.01;  // amplitudes log-uniform over [min, 10 min]
    std::uint64_t scene_seed = 1;
    RisLayout ris;
    HoleLayout holes;
    FanLayout fan;
    double needle_step_m = 0.002;
    double second_order_coupling = kDefaultCoupling;
};

enum class ScaleProfile { Desk, Paper };

/// Desk: 2000-point grid from 4 GHz, 10 x 5 holes. Paper: 3-10 GHz / 7000 points, 25 x 10 holes.
SceneParams default_scene_params(ScaleProfile profile);

/// Deterministic scene from parameters; scatterers drawn from scene_seed.
Enclosure build_scene(const SceneParams& params);

}  // namespace atr
