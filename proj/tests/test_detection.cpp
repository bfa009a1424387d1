#include <doctest.h>

#include "atr/detection.hpp"
#include "atr/ris_optimizer.hpp"
#include "atr/scene_builder.hpp"
#include "atr/seeding.hpp"

using namespace atr;

namespace {

ChannelResponse random_response(const FrequencyGrid& g, Rng& rng) {
    std::vector<cplx> s(g.size());
    for (auto& v : s) v = {rng.normal(), rng.normal()};
    return ChannelResponse(g, s);
}

Enclosure desk() { return build_scene(default_scene_params(ScaleProfile::Desk)); }

std::vector<std::size_t> all_holes(const Enclosure& e) {
    std::vector<std::size_t> h(e.holes.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = i;
    return h;
}

}  // namespace

TEST_CASE("euclidean distance basics") {
    const FrequencyGrid g(1e9, 1e6, 1);
    CHECK(euclidean_distance(ChannelResponse(g, {{3, 0}}), ChannelResponse(g, {{0, 0}})) == 3.0);
    Rng rng(1);
    const FrequencyGrid g8(1e9, 1e6, 8);
    const auto a = random_response(g8, rng);
    CHECK(euclidean_distance(a, a) == 0.0);
    CHECK_THROWS_AS(euclidean_distance(a, ChannelResponse::zeros(g)), GridMismatch);
}

TEST_CASE("mnd basics") {
    Rng rng(2);
    const FrequencyGrid g(1e9, 1e6, 16);
    const auto ref = random_response(g, rng);
    CHECK(mnd(ref, ref) == 0.0);
    CHECK(mnd(ref.scaled(2.0), ref) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mnd(ref.scaled(std::polar(1.0, 0.7)), ref.scaled(std::polar(1.0, 0.7))) == 0.0);
    CHECK_THROWS_AS(mnd(ref, ChannelResponse::zeros(g)), DegenerateReference);
}

TEST_CASE("metric policy follows bandwidth") {
    CHECK(metric_for_band({5e9, 20e6}) == Metric::Euclidean);
    CHECK(metric_for_band({5e9, 999e6}) == Metric::Euclidean);
    CHECK(metric_for_band({5e9, 1e9}) == Metric::Mnd);
    CHECK(parse_metric("mnd") == Metric::Mnd);
    CHECK_THROWS_AS(parse_metric("cosine"), ConfigError);
}

TEST_CASE("property: scaling all responses scales euclidean distance and keeps verdicts") {
    Rng rng(3);
    const FrequencyGrid g(1e9, 1e6, 32);
    for (int t = 0; t < 200; ++t) {
        const auto a = random_response(g, rng), b = random_response(g, rng), c = random_response(g, rng);
        const double s = rng.uniform(0.1, 10.0);
        const double dab = euclidean_distance(a, b), dac = euclidean_distance(a, c);
        CHECK(euclidean_distance(a.scaled(s), b.scaled(s)) == doctest::Approx(s * dab).epsilon(1e-12));
        // threshold calibrated from the same (scaled) data: the decision does not change
        CHECK((euclidean_distance(a.scaled(s), c.scaled(s)) > s * dab) == (dac > dab));
    }
}

TEST_CASE("noiseless fan-free calibration gives threshold 0 and FPR 0 on its own snapshots") {
    const auto e = desk();
    const auto configs = random_configs(3, e.ris.size(), 4);
    CalibrationSpec cal;
    cal.noise = NoiseSpec::noiseless();
    const auto p = provision(e, configs, {5e9, 20e6}, Metric::Euclidean, cal);
    CHECK(p.threshold == 0.0);
    CHECK(p.calibration_distances.size() == 30);
    CHECK(p.provenance.label == "fan-off calibration");
    for (const auto& c : configs) {
        const auto h = synthesize(with_fan_stopped(e), c, std::nullopt, 0.5, NoiseSpec::noiseless());
        CHECK_FALSE(detect(p, h, c).tampered);
    }
}

TEST_CASE("noisy calibration: every calibration snapshot is classified untampered") {
    const auto e = desk();
    const Bench bench(with_fan_stopped(e));
    const auto configs = random_configs(2, e.ris.size(), 5);
    CalibrationSpec cal;
    cal.noise = {35.0, 99};
    const auto p = provision(bench, configs, {5e9, 40e6}, Metric::Euclidean, cal);
    CHECK(p.threshold > 0.0);
    // replay the snapshots exactly as calibration drew them
    for (const auto& c : configs) {
        for (std::size_t k = 1; k <= cal.snapshots; ++k) {
            const auto h = bench.measure(c, nullptr, cal.t_start_s + static_cast<double>(k) * cal.t_step_s,
                                         cal.noise.reseeded(derive_seed(cal.noise.rng_seed, {k})));
            CHECK_FALSE(detect(p, h, c).tampered);
        }
    }
}

TEST_CASE("fan-on calibration raises the threshold") {
    const auto e = desk();
    const auto configs = random_configs(3, e.ris.size(), 6);
    CalibrationSpec off;
    off.noise = {40.0, 8};
    auto on = off;
    on.fan_on = true;
    const auto p_off = provision(e, configs, {5e9, 20e6}, Metric::Euclidean, off);
    const auto p_on = provision(e, configs, {5e9, 20e6}, Metric::Euclidean, on);
    CHECK(p_on.threshold > p_off.threshold);
    const auto re = recalibrate(p_off, Bench(e), on, "fan-on calibration");
    CHECK(re.threshold == p_on.threshold);
    CHECK(re.provenance.label == "fan-on calibration");
}

TEST_CASE("detect uses a strict inequality and rejects unknown configurations") {
    const auto e = desk();
    const auto c = RisConfig::zeros(e.ris.size());
    CalibrationSpec cal;
    cal.noise = NoiseSpec::noiseless();
    auto p = provision(e, {c}, {5e9, 20e6}, Metric::Euclidean, cal);
    const auto ref = p.references.at(c);
    CHECK(detect(p, ref, c).distance == 0.0);
    CHECK_FALSE(detect(p, ref, c).tampered);

    const auto shifted = ref.scaled(1.01);
    p.threshold = euclidean_distance(shifted, ref);
    CHECK_FALSE(detect(p, shifted, c).tampered);
    p.threshold = std::nextafter(p.threshold, 0.0);
    CHECK(detect(p, shifted, c).tampered);
    CHECK_THROWS_AS(detect(p, ref, c.complement()), UnknownConfig);
}

TEST_CASE("provision validates its inputs") {
    const auto e = desk();
    const auto c = RisConfig::zeros(e.ris.size());
    CalibrationSpec cal;
    CHECK_THROWS_AS(provision(e, {}, {5e9, 20e6}, Metric::Euclidean, cal), ConfigError);
    CHECK_THROWS_AS(provision(e, {c, c}, {5e9, 20e6}, Metric::Euclidean, cal), ConfigError);
    CHECK_THROWS_AS(provision(e, {c}, {9e9, 20e6}, Metric::Euclidean, cal), BandOutOfRange);
    cal.margin = 0.5;
    CHECK_THROWS_AS(provision(e, {c}, {5e9, 20e6}, Metric::Euclidean, cal), ConfigError);
}

TEST_CASE("full band, noiseless: a 20 mm needle is detected at every hole") {
    const auto e = desk();
    const auto configs = random_configs(3, e.ris.size(), 7);
    CalibrationSpec cal;
    cal.noise = NoiseSpec::noiseless();
    const auto band = BandSelection::full_span(e.grid);
    const auto p = provision(e, configs, band, metric_for_band(band), cal);
    TrialSpec trials;
    trials.holes = all_holes(e);
    trials.noise = NoiseSpec::noiseless();
    const auto ev = evaluate(p, e, trials);
    CHECK(ev.report.fnr == 0.0);
    CHECK(ev.report.fpr == 0.0);
    CHECK(ev.per_hole.size() == e.holes.size());
    CHECK(ev.trials.size() == e.holes.size() * configs.size());
}

TEST_CASE("depth 0 is never detected once the threshold is positive") {
    const auto e = desk();
    CalibrationSpec cal;
    cal.noise = {40.0, 3};
    const auto p = provision(e, random_configs(2, e.ris.size(), 8), {5e9, 20e6}, Metric::Euclidean, cal);
    REQUIRE(p.threshold > 0.0);
    TrialSpec trials;
    trials.holes = {0, 1, 2};
    trials.depths_m = {0.0};
    trials.noise = NoiseSpec::noiseless();
    CHECK(evaluate(p, e, trials).report.fnr == 1.0);
}

TEST_CASE("evaluate_many agrees with separate evaluations and with any worker count") {
    const auto e = desk();
    const Bench bench(e);
    const auto configs = random_configs(3, e.ris.size(), 9);
    CalibrationSpec cal;
    cal.noise = {40.0, 10};
    const auto narrow = provision(bench, configs, {5e9, 20e6}, Metric::Euclidean, cal);
    const auto wide = provision(bench, {configs[0]}, {5e9, 160e6}, Metric::Euclidean, cal);
    TrialSpec trials;
    trials.holes = {0, 7, 13, 21, 33, 49};
    trials.noise = {40.0, 11};
    trials.seed = 12;
    const auto many = evaluate_many({&narrow, &wide}, bench, trials, 3);
    const auto a = evaluate(narrow, bench, trials, 1);
    const auto b = evaluate(wide, bench, trials, 2);
    CHECK(many[0].report.fnr == a.report.fnr);
    CHECK(many[0].report.fpr == a.report.fpr);
    CHECK(many[1].report.fnr == b.report.fnr);
    REQUIRE(many[0].trials.size() == a.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i)
        CHECK(many[0].trials[i].distance_tampered == a.trials[i].distance_tampered);
}

TEST_CASE("an inert RIS gives the same error rates for every configuration") {
    const auto e = with_inert_ris(desk());
    const auto configs = random_configs(4, e.ris.size(), 13);
    CalibrationSpec cal;
    cal.noise = {40.0, 14};
    TrialSpec trials;
    trials.holes = all_holes(e);
    trials.noise = {40.0, 15};
    std::vector<double> fnr;
    for (const auto& c : configs) fnr.push_back(evaluate(provision(e, {c}, {5e9, 20e6}, Metric::Euclidean, cal), e, trials).report.fnr);
    for (double x : fnr) CHECK(x == fnr.front());
}

TEST_CASE("confusion report") {
    const auto r = ConfusionReport::from_counts({3, 1, 9, 7});
    CHECK(r.fpr == doctest::Approx(0.1));
    CHECK(r.fnr == doctest::Approx(0.7));
    CHECK(r.balanced_accuracy == doctest::Approx(0.6));
}
