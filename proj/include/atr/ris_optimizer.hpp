#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "atr/core_types.hpp"
#include "atr/enclosure.hpp"

namespace atr {

ATR_DEFINE_ERROR(InsufficientSnapshots, Error);

/// Scalar objective over RIS configurations; lower is better.
struct CostFunction {
    std::function<double(const RisConfig&)> evaluate;
    std::string description;
    BandSelection band;
    std::size_t config_length = 0;
};

/// n configurations with i.i.d. fair-coin bits. Duplicates are possible for small L.
std::vector<RisConfig> random_configs(std::size_t n, std::size_t length, std::uint64_t seed);

/// Mean in-band |H| of one untampered synthesis at t = 0.
CostFunction cost_mean_amplitude(const Enclosure& enclosure, const BandSelection& band, const NoiseSpec& noise);

/// Mean in-band sample standard deviation (n - 1) of |H| over n_snapshots times
/// t_k = k t_step. The fan rotates when fan_on, otherwise it is held still.
CostFunction cost_temporal_std(const Enclosure& enclosure, const BandSelection& band, std::size_t n_snapshots,
                               double t_step_s, const NoiseSpec& noise, bool fan_on = true);

struct OptimizerParams {
    std::size_t population = 50;
    double elite_fraction = 0.25;
    std::size_t generations = 60;
    double p_min = 0.05;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct TraceRow {
    std::size_t generation = 0;
    double best_cost = 0.0;  // best so far, non-increasing
    double mean_cost = 0.0;  // mean over this generation's population
};

struct OptimizerState {
    std::vector<std::pair<RisConfig, double>> population;
    std::vector<double> marginals;  // probability of bit '1' per element
    std::size_t generation = 0;
    std::uint64_t rng_seed = 0;
};

struct OptimizeResult {
    RisConfig best;
    double best_cost = 0.0;
    std::vector<TraceRow> trace;
    OptimizerState final_state;
    std::size_t evaluations = 0;
};

/// Element-wise probability (estimation-of-distribution) search: sample from the
/// per-element marginals, keep the elite fraction, re-estimate the marginals from the
/// elites with clamping to [p_min, 1 - p_min]. The best-so-far configuration is carried
/// into every generation. Ties are broken by the lexicographically smaller bit vector.
OptimizeResult optimize(const CostFunction& cost, std::size_t length, const OptimizerParams& params);

}  // namespace atr
