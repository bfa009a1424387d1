#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "atr/scene_builder.hpp"
#include "atr/seeding.hpp"
#include "atr/ris_optimizer.hpp"
#include "oracles.hpp"

using namespace atr;

namespace {

double max_abs(std::span<const cplx> v) {
    double m = 0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

Enclosure desk() { return build_scene(default_scene_params(ScaleProfile::Desk)); }

Enclosure small_scene(double coupling = kDefaultCoupling) {
    auto p = default_scene_params(ScaleProfile::Desk);
    p.grid = {4.5e9, 2e6, 300};
    p.ris.rows = 3;
    p.ris.cols = 4;
    p.scatterer_count = 12;
    p.second_order_coupling = coupling;
    return build_scene(p);
}

}  // namespace

TEST_CASE("bare line of sight has flat magnitude gamma / d") {
    Enclosure e;
    e.grid = FrequencyGrid(3e9, 1e6, 7000);
    e.tx = {0.1, 0.1, 0.1};
    e.rx = {0.3, 0.2, 0.1};
    e.path_gain = 0.7;
    const auto h = synthesize(e, RisConfig{}, std::nullopt, 0.0, NoiseSpec::noiseless());
    const double expected = 0.7 / distance(e.tx, e.rx);
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(std::abs(h[k]) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("synthesis matches direct per-bin evaluation") {
    const auto e = small_scene();
    Rng rng(21);
    for (int t = 0; t < 4; ++t) {
        std::vector<std::uint8_t> bits(e.ris.size());
        for (auto& b : bits) b = rng.coin();
        const RisConfig c(bits);
        const TamperSpec tamper{rng.index(e.holes.size()), 0.013, default_needle_amplitude(e)};
        const double time = rng.uniform(0.0, 2.0);
        const auto fast = synthesize(e, c, tamper, time, NoiseSpec::noiseless());
        const auto slow = oracle::channel(e, c, &tamper, time);
        CHECK(max_abs_diff(fast.samples(), slow) <= 1e-12 * max_abs(slow));
    }
}

TEST_CASE("long grids keep the phasor recurrence accurate") {
    auto p = default_scene_params(ScaleProfile::Paper);
    p.scatterer_count = 3;
    p.ris.rows = p.ris.cols = 2;
    p.fan.present = false;
    const auto e = build_scene(p);
    const auto c = RisConfig::parse("0110");
    const auto fast = synthesize(e, c, std::nullopt, 0.0, NoiseSpec::noiseless());
    const auto slow = oracle::channel(e, c, nullptr, 0.0);
    CHECK(max_abs_diff(fast.samples(), slow) <= 1e-12 * max_abs(slow));
}

TEST_CASE("synthesis is deterministic for a fixed seed") {
    const auto e = desk();
    const auto c = RisConfig::zeros(e.ris.size());
    const NoiseSpec n{30.0, 77};
    CHECK(synthesize(e, c, TamperSpec{3, 0.01, default_needle_amplitude(e)}, 0.4, n) ==
          synthesize(e, c, TamperSpec{3, 0.01, default_needle_amplitude(e)}, 0.4, n));
    CHECK(synthesize(e, c, std::nullopt, 0.4, n) != synthesize(e, c, std::nullopt, 0.4, n.reseeded(78)));
}

TEST_CASE("noise follows the requested SNR against mean full-grid power") {
    const auto e = desk();
    const auto c = RisConfig::zeros(e.ris.size());
    const auto clean = synthesize(e, c, std::nullopt, 0.0, NoiseSpec::noiseless());
    const auto noisy = synthesize(e, c, std::nullopt, 0.0, NoiseSpec{20.0, 5});
    double ps = 0, pn = 0;
    for (std::size_t k = 0; k < clean.size(); ++k) {
        ps += std::norm(clean[k]);
        pn += std::norm(noisy[k] - clean[k]);
    }
    CHECK(10.0 * std::log10(ps / pn) == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("20 mm needle with 2 mm step contributes exactly 10 point scatterers") {
    const auto e = small_scene(0.0);
    const TamperSpec tamper{2, 0.020, default_needle_amplitude(e)};
    const auto pts = needle_points(e, tamper);
    REQUIRE(pts.size() == 10);
    CHECK(count_paths(e, tamper).needle_paths == 10);
    // summing the ten contributions separately reproduces the imprint
    std::vector<cplx> sum(e.grid.size());
    for (const auto& p : pts) {
        const double a = distance(e.tx, p), b = distance(p, e.rx);
        for (std::size_t k = 0; k < sum.size(); ++k)
            sum[k] += oracle::path(e.grid.frequency(k), tamper.needle_amplitude / (a * b), a + b);
    }
    const auto imp = imprint(e, RisConfig::zeros(e.ris.size()), tamper, 0.0);
    CHECK(max_abs_diff(imp.samples(), sum) <= 1e-12 * max_abs(sum));
    CHECK(needle_points(e, TamperSpec{2, 0.021, {}}).size() == 11);
}

TEST_CASE("complement symmetry: H(c) + H(~c) = 2 H_static without coupling or fan") {
    auto p = default_scene_params(ScaleProfile::Desk);
    p.second_order_coupling = 0.0;
    p.fan.present = false;
    const auto e = build_scene(p);
    const auto stat = synthesize(with_inert_ris(e), RisConfig::zeros(e.ris.size()), std::nullopt, 0.0,
                                 NoiseSpec::noiseless());
    for (const auto& c : random_configs(5, e.ris.size(), 31)) {
        const auto a = synthesize(e, c, std::nullopt, 0.0, NoiseSpec::noiseless());
        const auto b = synthesize(e, c.complement(), std::nullopt, 0.0, NoiseSpec::noiseless());
        const auto sum = a + b;
        const auto twice = stat.scaled(2.0);
        CHECK(max_abs_diff(sum.samples(), twice.samples()) <= 1e-12 * max_abs(twice.samples()));
    }
}

TEST_CASE("imprint: zero depth, additivity and configuration dependence") {
    const auto e = small_scene();
    const auto c = RisConfig::parse("010011100101");
    const TamperSpec none{4, 0.0, default_needle_amplitude(e)};
    CHECK(max_abs(imprint(e, c, none, 0.0).samples()) == 0.0);

    const TamperSpec t{4, 0.02, default_needle_amplitude(e)};
    const auto full = synthesize(e, c, t, 0.3, NoiseSpec::noiseless());
    const auto clean = synthesize(e, c, std::nullopt, 0.3, NoiseSpec::noiseless());
    const auto imp = imprint(e, c, t, 0.3);
    CHECK(max_abs_diff((full - clean).samples(), imp.samples()) <= 1e-12 * max_abs(full.samples()));

    // static scatterers do not enter the imprint
    auto bare = e;
    bare.scatterers.clear();
    CHECK(max_abs_diff(imprint(bare, c, t, 0.0).samples(), imp.samples()) <= 1e-12 * max_abs(imp.samples()));

    // without coupling the imprint ignores the configuration, with it it does not
    auto uncoupled = e;
    uncoupled.second_order_coupling = 0.0;
    CHECK(imprint(uncoupled, c, t, 0.0) == imprint(uncoupled, c.complement(), t, 0.0));
    CHECK(max_abs_diff(imp.samples(), imprint(e, c.complement(), t, 0.0).samples()) > 1e-3 * max_abs(imp.samples()));
}

TEST_CASE("time series: static without fan, periodic with it") {
    auto e = small_scene();
    const auto c = RisConfig::zeros(e.ris.size());
    auto no_fan = e;
    no_fan.fan.reset();
    const auto still = time_series(no_fan, c, std::nullopt, 0.0, 0.05, 20, NoiseSpec::noiseless());
    CHECK(still.size() == 20);
    for (const auto& s : still) CHECK(s == still.front());

    REQUIRE(e.fan);
    e.fan->blade_count = 3;
    const double period = 2.0 * std::numbers::pi / (e.fan->angular_rate_rad_s * 3);
    const auto spin = time_series(e, c, std::nullopt, 0.1, period, 5, NoiseSpec::noiseless());
    for (const auto& s : spin)
        CHECK(max_abs_diff(s.samples(), spin.front().samples()) <= 1e-12 * max_abs(s.samples()));
    const auto off_period = time_series(e, c, std::nullopt, 0.1, period / 2, 2, NoiseSpec::noiseless());
    CHECK(max_abs_diff(off_period[0].samples(), off_period[1].samples()) > 0.0);
}

TEST_CASE("invalid inputs are rejected") {
    const auto e = small_scene();
    CHECK_THROWS_AS(synthesize(e, RisConfig::zeros(3), std::nullopt, 0, {}), ConfigLengthMismatch);
    CHECK_THROWS_AS(synthesize(e, RisConfig::zeros(12), TamperSpec{999, 0.01, {}}, 0, {}), InvalidHoleIndex);
    auto bad = e;
    bad.tx = {std::nan(""), 0, 0};
    CHECK_THROWS_AS(synthesize(bad, RisConfig::zeros(12), std::nullopt, 0, {}), NonFiniteGeometry);
    bad = e;
    bad.rx = bad.tx;
    CHECK_THROWS_AS(synthesize(bad, RisConfig::zeros(12), std::nullopt, 0, {}), NonFiniteGeometry);
}

TEST_CASE("efficiency profile is a raised cosine") {
    const EfficiencyProfile s;
    CHECK(s(5.0e9) == 1.0);
    CHECK(s(5.35e9) == doctest::Approx(0.5));
    CHECK(s(4.3e9) == 0.0);
    CHECK(s(6.0e9) == 0.0);
}

TEST_CASE("scene builder is seeded and places holes on the lid") {
    const auto a = desk(), b = desk();
    REQUIRE(a.scatterers.size() == b.scatterers.size());
    for (std::size_t i = 0; i < a.scatterers.size(); ++i) CHECK(a.scatterers[i].amplitude == b.scatterers[i].amplitude);
    CHECK(a.holes.size() == 50);
    CHECK(a.ris.size() == 64);
    for (const auto& h : a.holes) CHECK(h.entry.z == a.box_dims.z);
    auto p = default_scene_params(ScaleProfile::Desk);
    p.scene_seed = 2;
    CHECK(build_scene(p).scatterers[0].amplitude != a.scatterers[0].amplitude);
    CHECK(default_needle_amplitude(a) == cplx(0.05 * median_scatterer_magnitude(a), 0.0));
}
