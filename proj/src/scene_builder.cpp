#include "atr/scene_builder.hpp"

#include <cmath>
#include <numbers>

#include "atr/seeding.hpp"

namespace atr {

SceneParams default_scene_params(ScaleProfile profile) {
    SceneParams p;
    if (profile == ScaleProfile::Paper) {
        p.grid = GridParams{3.0e9, 1.0e6, 7000};
        p.holes.nx = 25;
        p.holes.ny = 10;
    }
    return p;
}

Enclosure build_scene(const SceneParams& params) {
    Enclosure enc;
    enc.grid = params.grid.grid();
    enc.box_dims = params.box_dims;
    enc.tx = params.tx;
    enc.rx = params.rx;
    enc.needle_step_m = params.needle_step_m;
    enc.second_order_coupling = params.second_order_coupling;

    Rng rng(derive_seed(params.scene_seed, "scatterers"));
    const double margin = 0.01;
    const double min_clearance = 0.03;
    enc.scatterers.reserve(params.scatterer_count);
    while (enc.scatterers.size() < params.scatterer_count) {
        Vec3 pos{rng.uniform(margin, params.box_dims.x - margin), rng.uniform(margin, params.box_dims.y - margin),
                 rng.uniform(margin, params.box_dims.z - margin)};
        const double log_amp = std::log10(params.scatterer_amplitude_min) + rng.uniform();
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        if (distance(pos, enc.tx) < min_clearance || distance(pos, enc.rx) < min_clearance) continue;
        enc.scatterers.push_back({pos, std::polar(std::pow(10.0, log_amp), phase)});
    }

    const auto& ris = params.ris;
    const Vec3 rdir = ris.row_dir.normalized();
    const Vec3 cdir = ris.col_dir.normalized();
    for (std::size_t r = 0; r < ris.rows; ++r) {
        for (std::size_t c = 0; c < ris.cols; ++c) {
            const double ro = (static_cast<double>(r) - 0.5 * static_cast<double>(ris.rows - 1)) * ris.pitch_m;
            const double co = (static_cast<double>(c) - 0.5 * static_cast<double>(ris.cols - 1)) * ris.pitch_m;
            enc.ris.element_positions.push_back(ris.center + rdir * ro + cdir * co);
            enc.ris.element_gain.push_back(ris.element_gain);
        }
    }
    enc.ris.efficiency = ris.efficiency;

    const auto& holes = params.holes;
    const double lid = params.box_dims.z;
    for (std::size_t iy = 0; iy < holes.ny; ++iy) {
        for (std::size_t ix = 0; ix < holes.nx; ++ix) {
            const double fx = holes.nx > 1 ? static_cast<double>(ix) / static_cast<double>(holes.nx - 1) : 0.5;
            const double fy = holes.ny > 1 ? static_cast<double>(iy) / static_cast<double>(holes.ny - 1) : 0.5;
            const double x = holes.margin_m + fx * (params.box_dims.x - 2.0 * holes.margin_m);
            const double y = holes.margin_m + fy * (params.box_dims.y - 2.0 * holes.margin_m);
            enc.holes.push_back({{x, y, lid}, {0.0, 0.0, -1.0}});
        }
    }

    if (params.fan.present) {
        FanRotor fan;
        fan.hub = params.fan.hub;
        fan.axis = params.fan.axis;
        fan.blade_count = params.fan.blade_count;
        fan.blade_radius_m = params.fan.blade_radius_m;
        fan.angular_rate_rad_s = params.fan.angular_rate_rad_s;
        fan.blade_amplitude = median_scatterer_magnitude(enc) * params.fan.amplitude_factor;
        enc.fan = fan;
    }
    enc.validate();
    return enc;
}

}  // namespace atr
