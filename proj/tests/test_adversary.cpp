#include <doctest.h>

#include "atr/adversary.hpp"
#include "atr/ris_optimizer.hpp"
#include "atr/scene_builder.hpp"

using namespace atr;

namespace {

Enclosure desk(double coupling = kDefaultCoupling) {
    auto p = default_scene_params(ScaleProfile::Desk);
    p.second_order_coupling = coupling;
    return build_scene(p);
}

double max_abs(std::span<const cplx> v) {
    double m = 0;
    for (auto x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const ChannelResponse& a, const ChannelResponse& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

AttackPlan plan_for(const Enclosure& e, AttackStrategy s, std::vector<RisConfig> pool = {}) {
    AttackPlan plan;
    plan.strategy = s;
    plan.replica = make_replica(e, 0.0, 1);
    plan.guess_pool = std::move(pool);
    plan.seed = 5;
    return plan;
}

}  // namespace

TEST_CASE("strategy names round trip") {
    for (auto s : {AttackStrategy::ExactConfig, AttackStrategy::RandomGuess, AttackStrategy::AverageImprint})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK_THROWS_AS(parse_strategy("jamming"), ConfigError);
}

TEST_CASE("replica: exact copy at zero perturbation, jittered otherwise") {
    const auto e = desk();
    const auto same = make_replica(e, 0.0, 3);
    for (std::size_t i = 0; i < e.scatterers.size(); ++i) CHECK(same.scatterers[i].amplitude == e.scatterers[i].amplitude);
    const auto off = make_replica(e, 0.1, 3);
    CHECK(off.scatterers[0].amplitude != e.scatterers[0].amplitude);
    CHECK(off.ris.element_positions == e.ris.element_positions);
    CHECK_THROWS_AS(make_replica(e, -1.0, 3), ConfigError);
}

TEST_CASE("replica imprint equals the true imprint for a perfect replica") {
    const auto e = desk();
    const auto plan = plan_for(e, AttackStrategy::ExactConfig);
    const auto c = random_configs(1, e.ris.size(), 2)[0];
    const TamperSpec t{11, 0.02, default_needle_amplitude(e)};
    CHECK(replica_imprint(plan, t, c) == imprint(e, c, t, 0.0));
    CHECK(max_abs(replica_imprint(plan, TamperSpec{11, 0.0, t.needle_amplitude}, c).samples()) == 0.0);
}

TEST_CASE("distinct guesses give distinct imprints on a coupled scene") {
    const auto e = desk();
    const auto plan = plan_for(e, AttackStrategy::RandomGuess);
    const auto cs = random_configs(2, e.ris.size(), 3);
    const TamperSpec t{20, 0.02, default_needle_amplitude(e)};
    const BandSelection band{5e9, 160e6};
    const auto a = extract_band(replica_imprint(plan, t, cs[0]), band);
    const auto b = extract_band(replica_imprint(plan, t, cs[1]), band);
    CHECK(max_abs_diff(a, b) > 0.01 * max_abs(a.samples()));
}

TEST_CASE("exact-config attack cancels the tamper exactly") {
    const auto e = desk();
    const auto c = random_configs(1, e.ris.size(), 4)[0];
    auto plan = plan_for(e, AttackStrategy::ExactConfig);
    plan.leaked_config = c;
    const TamperSpec t{7, 0.02, default_needle_amplitude(e)};
    const auto attacked = attacked_measurement(e, c, t, plan, 0.25, NoiseSpec::noiseless());
    const auto honest = synthesize(e, c, std::nullopt, 0.25, NoiseSpec::noiseless());
    CHECK(max_abs_diff(attacked, honest) <= 1e-12 * max_abs(honest.samples()));
    // no tamper: nothing is injected
    CHECK(attacked_measurement(e, c, std::nullopt, plan, 0.25, NoiseSpec{30, 1}) ==
          synthesize(e, c, std::nullopt, 0.25, NoiseSpec{30, 1}));
    plan.leaked_config.reset();
    CHECK_THROWS_AS(compensation_spectrum(plan, t), ConfigNotLeaked);
}

TEST_CASE("average over a duplicated pool equals the random guess of that configuration") {
    const auto e = desk();
    const auto c = random_configs(1, e.ris.size(), 5)[0];
    const TamperSpec t{30, 0.02, default_needle_amplitude(e)};
    const auto avg = compensation_spectrum(plan_for(e, AttackStrategy::AverageImprint, {c, c}), t);
    const auto guess = compensation_spectrum(plan_for(e, AttackStrategy::RandomGuess, {c}), t);
    CHECK(max_abs_diff(avg, guess) <= 1e-15 * max_abs(guess.samples()));
}

TEST_CASE("average over complement pairs leaves only the configuration-independent imprint") {
    const auto e = desk();
    const TamperSpec t{18, 0.02, default_needle_amplitude(e)};
    std::vector<RisConfig> pool;
    for (const auto& c : random_configs(6, e.ris.size(), 6)) {
        pool.push_back(c);
        pool.push_back(c.complement());
    }
    const auto avg = compensation_spectrum(plan_for(e, AttackStrategy::AverageImprint, pool), t);
    const auto uncoupled = imprint(desk(0.0), pool[0], t, 0.0);
    CHECK(max_abs_diff(avg, -uncoupled) <= 1e-10 * max_abs(uncoupled.samples()));
}

TEST_CASE("without coupling every strategy injects the same compensation and a warning is raised") {
    const auto e = desk(0.0);
    const auto pool = random_configs(5, e.ris.size(), 7);
    const TamperSpec t{3, 0.02, default_needle_amplitude(e)};
    auto exact = plan_for(e, AttackStrategy::ExactConfig, pool);
    exact.leaked_config = random_configs(1, e.ris.size(), 8)[0];
    const auto guess = plan_for(e, AttackStrategy::RandomGuess, pool);
    const auto avg = plan_for(e, AttackStrategy::AverageImprint, pool);
    const auto a = compensation_spectrum(exact, t);
    CHECK(compensation_spectrum(guess, t) == a);
    CHECK(max_abs_diff(compensation_spectrum(avg, t), a) <= 1e-15 * max_abs(a.samples()));
    CHECK(coupling_warning(avg).has_value());
    CHECK_FALSE(coupling_warning(plan_for(desk(), AttackStrategy::AverageImprint, pool)).has_value());
}

TEST_CASE("random guess is seeded per tamper and drawn from the pool") {
    const auto e = desk();
    const auto pool = random_configs(8, e.ris.size(), 9);
    const auto plan = plan_for(e, AttackStrategy::RandomGuess, pool);
    const TamperSpec t{4, 0.02, {}};
    CHECK(random_guess(plan, t) == random_guess(plan, t));
    CHECK(std::find(pool.begin(), pool.end(), random_guess(plan, t)) != pool.end());
    CHECK_THROWS_AS(random_guess(plan_for(e, AttackStrategy::RandomGuess), t), EmptyGuessPool);
}

TEST_CASE("attack sweep: exact config evades, averaging is separable at 160 MHz") {
    const auto e = desk();
    const auto secrets = random_configs(20, e.ris.size(), 10);
    const auto pool = random_configs(50, e.ris.size(), 11);
    CalibrationSpec cal;
    cal.noise = {40.0, 12};
    TrialSpec trials;
    for (std::size_t h = 0; h < e.holes.size(); h += 2) trials.holes.push_back(h);
    trials.noise = {40.0, 13};
    trials.seed = 14;
    const std::vector<BandSelection> bands{{5e9, 160e6}};

    auto exact = plan_for(e, AttackStrategy::ExactConfig);
    const auto ex = attack_fnr_sweep(e, secrets, exact, bands, cal, trials);
    CHECK(ex.bands[0].hole_evasion >= 0.9);
    CHECK(ex.bands[0].fnr >= 0.9);
    CHECK(ex.rows.size() == trials.holes.size() * secrets.size());

    const auto av = attack_fnr_sweep(e, secrets, plan_for(e, AttackStrategy::AverageImprint, pool), bands, cal, trials);
    CHECK(av.bands[0].fnr < 0.5);
    // the attacked-tampered distances sit above the honest ones for most trials
    std::size_t above = 0;
    for (const auto& r : av.rows) above += r.distance_attacked > av.bands[0].max_honest;
    CHECK(static_cast<double>(above) / static_cast<double>(av.rows.size()) > 0.5);
    // the honest half of the sweep does not depend on the strategy
    for (std::size_t i = 0; i < av.rows.size(); ++i) CHECK(av.rows[i].distance_honest == ex.rows[i].distance_honest);
}

TEST_CASE("attack csv layout") {
    AttackRow r{AttackStrategy::RandomGuess, 5e9, 2e7, 3, 0.02, RisConfig::zeros(4), 0.5, 1.25, 1.0, false};
    CHECK(attack_csv({r}) ==
          "strategy,fc_hz,bw_hz,hole_index,distance_honest,distance_attacked,threshold,evaded\n"
          "random-guess,5e+09,2e+07,3,0.5,1.25,1,0\n");
}
