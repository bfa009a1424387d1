#include "atr/ris_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "atr/parallel.hpp"
#include "atr/seeding.hpp"

namespace atr {

std::vector<RisConfig> random_configs(std::size_t n, std::size_t length, std::uint64_t seed) {
    if (n == 0 || length == 0) throw ConfigError("random_configs: n and length must be positive");
    Rng rng(derive_seed(seed, "random-configs"));
    std::vector<RisConfig> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint8_t> bits(length);
        for (auto& b : bits) b = rng.coin() ? 1 : 0;
        out.emplace_back(std::move(bits));
    }
    return out;
}

namespace {

std::string band_text(const BandSelection& band) {
    return "fc=" + std::to_string(band.center_hz / 1e9) + " GHz, bw=" + std::to_string(band.bandwidth_hz / 1e6) + " MHz";
}

}  // namespace

CostFunction cost_mean_amplitude(const Enclosure& enclosure, const BandSelection& band, const NoiseSpec& noise) {
    auto bench = std::make_shared<const Bench>(with_fan_stopped(enclosure));
    const auto [first, last] = band_indices(bench->scene().grid(), band);
    CostFunction cost;
    cost.band = band;
    cost.config_length = bench->scene().ris_size();
    cost.description = "mean in-band |H| (" + band_text(band) + ")";
    cost.evaluate = [bench, first, last, noise](const RisConfig& c) {
        const auto h = bench->measure(c, nullptr, 0.0, noise);
        double acc = 0.0;
        for (std::size_t k = first; k <= last; ++k) acc += std::abs(h[k]);
        return acc / static_cast<double>(last - first + 1);
    };
    return cost;
}

CostFunction cost_temporal_std(const Enclosure& enclosure, const BandSelection& band, std::size_t n_snapshots,
                               double t_step_s, const NoiseSpec& noise, bool fan_on) {
    if (n_snapshots < 2) throw InsufficientSnapshots("temporal std needs at least 2 snapshots");
    auto bench = std::make_shared<const Bench>(fan_on ? enclosure : with_fan_stopped(enclosure));
    const auto [first, last] = band_indices(bench->scene().grid(), band);
    CostFunction cost;
    cost.band = band;
    cost.config_length = bench->scene().ris_size();
    cost.description = "mean in-band temporal std of |H| over " + std::to_string(n_snapshots) + " snapshots (" +
                       band_text(band) + ")";
    auto fan_parts = std::make_shared<std::vector<std::vector<cplx>>>();
    for (std::size_t k = 0; k < n_snapshots; ++k) fan_parts->push_back(bench->scene().fan_part(static_cast<double>(k) * t_step_s));
    cost.evaluate = [bench, fan_parts, first, last, n_snapshots, noise](const RisConfig& c) {
        const auto base = bench->configured(c);
        const std::size_t nb = last - first + 1;
        std::vector<std::vector<double>> mags(n_snapshots, std::vector<double>(nb));
        for (std::size_t k = 0; k < n_snapshots; ++k) {
            const auto h = bench->assemble(base, nullptr, &(*fan_parts)[k],
                                           noise.reseeded(derive_seed(noise.rng_seed, {k})));
            for (std::size_t b = 0; b < nb; ++b) mags[k][b] = std::abs(h[first + b]);
        }
        double acc = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            // shifted by the first snapshot so that a time-invariant bin gives exactly 0
            const double shift = mags[0][b];
            double mean = 0.0;
            for (std::size_t k = 0; k < n_snapshots; ++k) mean += mags[k][b] - shift;
            mean /= static_cast<double>(n_snapshots);
            double var = 0.0;
            for (std::size_t k = 0; k < n_snapshots; ++k) {
                const double d = mags[k][b] - shift - mean;
                var += d * d;
            }
            acc += std::sqrt(var / static_cast<double>(n_snapshots - 1));
        }
        return acc / static_cast<double>(nb);
    };
    return cost;
}

namespace {

bool better(const std::pair<RisConfig, double>& a, const std::pair<RisConfig, double>& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
}

}  // namespace

OptimizeResult optimize(const CostFunction& cost, std::size_t length, const OptimizerParams& params) {
    if (params.population < 2) throw ConfigError("optimize: population must be at least 2");
    if (!(params.elite_fraction > 0.0 && params.elite_fraction < 1.0))
        throw ConfigError("optimize: elite_fraction must lie in (0, 1)");
    if (params.generations < 1) throw ConfigError("optimize: generations must be at least 1");
    if (!(params.p_min >= 0.0 && params.p_min < 0.5)) throw ConfigError("optimize: p_min must lie in [0, 0.5)");
    if (length == 0) throw ConfigError("optimize: configuration length must be positive");
    if (cost.config_length != 0 && cost.config_length != length)
        throw ConfigLengthMismatch("optimize: cost expects " + std::to_string(cost.config_length) +
                                   "-bit configurations, optimizer asked for " + std::to_string(length));

    Rng rng(derive_seed(params.seed, "optimizer"));
    OptimizeResult result;
    OptimizerState& state = result.final_state;
    state.marginals.assign(length, 0.5);
    state.rng_seed = params.seed;
    const std::size_t n_elite =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(params.elite_fraction * static_cast<double>(params.population))));

    std::optional<std::pair<RisConfig, double>> best;
    for (std::size_t gen = 0; gen < params.generations; ++gen) {
        std::vector<RisConfig> sampled;
        sampled.reserve(params.population);
        for (std::size_t i = 0; i < params.population; ++i) {
            std::vector<std::uint8_t> bits(length);
            for (std::size_t l = 0; l < length; ++l) bits[l] = rng.uniform() < state.marginals[l] ? 1 : 0;
            sampled.emplace_back(std::move(bits));
        }
        std::vector<double> costs(sampled.size());
        parallel_for(sampled.size(), params.workers, [&](std::size_t i) { costs[i] = cost.evaluate(sampled[i]); });
        result.evaluations += sampled.size();

        state.population.clear();
        double mean = 0.0;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            if (!std::isfinite(costs[i])) throw Error("optimize: cost function returned a non-finite value");
            mean += costs[i];
            state.population.emplace_back(std::move(sampled[i]), costs[i]);
        }
        mean /= static_cast<double>(params.population);
        if (best) state.population.push_back(*best);  // elitism
        std::sort(state.population.begin(), state.population.end(), better);
        if (!best || better(state.population.front(), *best)) best = state.population.front();

        const std::size_t elites = std::min(n_elite, state.population.size());
        for (std::size_t l = 0; l < length; ++l) {
            std::size_t ones = 0;
            for (std::size_t e = 0; e < elites; ++e) ones += state.population[e].first.bit(l);
            const double p = static_cast<double>(ones) / static_cast<double>(elites);
            state.marginals[l] = std::clamp(p, params.p_min, 1.0 - params.p_min);
        }
        state.generation = gen + 1;
        result.trace.push_back({gen, best->second, mean});
    }
    result.best = best->first;
    result.best_cost = best->second;
    return result;
}

}  // namespace atr
