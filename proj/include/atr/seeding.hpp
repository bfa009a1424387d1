#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace atr {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based seed splitting: the child seed depends only on the parent seed
/// and the ordered key path, never on how many draws happened elsewhere.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) noexcept;
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) noexcept;

/// Stable 64-bit hash of a label (FNV-1a), used to name seed streams.
std::uint64_t label_hash(std::string_view label) noexcept;

/// Portable generator: mt19937_64 for raw bits; uniform and Gaussian variates are
/// derived here rather than through <random> distributions so that streams are
/// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    bool coin() { return (engine_() >> 63) != 0; }
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace atr
