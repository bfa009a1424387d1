#include "atr/core_types.hpp"

#include <cmath>
#include <string>

namespace atr {

FrequencyGrid::FrequencyGrid(double f_start_hz, double f_step_hz, std::size_t n_points)
    : f_start_(f_start_hz), f_step_(f_step_hz), n_points_(n_points) {
    if (!std::isfinite(f_start_hz) || !std::isfinite(f_step_hz))
        throw ConfigError("frequency grid: non-finite start or step");
    if (!(f_step_hz > 0.0))
        throw ConfigError("frequency grid: f_step must be positive");
    if (n_points == 0)
        throw ConfigError("frequency grid: n_points must be at least 1");
}

FrequencyGrid FrequencyGrid::instrument_default() { return FrequencyGrid(3.0e9, 1.0e6, 7000); }

std::vector<double> FrequencyGrid::frequencies() const {
    std::vector<double> f(n_points_);
    for (std::size_t k = 0; k < n_points_; ++k) f[k] = frequency(k);
    return f;
}

BandSelection BandSelection::full_span(const FrequencyGrid& grid) {
    return {grid.center(), grid.bandwidth()};
}

ChannelResponse::ChannelResponse(FrequencyGrid grid, std::vector<cplx> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw InvalidResponse("channel response: " + std::to_string(samples_.size()) +
                              " samples for a grid of " + std::to_string(grid_.size()) + " points");
    for (const auto& s : samples_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw InvalidResponse("channel response: non-finite sample");
    }
}

ChannelResponse ChannelResponse::zeros(const FrequencyGrid& grid) {
    return ChannelResponse(grid, std::vector<cplx>(grid.size()));
}

ChannelResponse ChannelResponse::scaled(cplx factor) const {
    std::vector<cplx> out(samples_);
    for (auto& s : out) s *= factor;
    return ChannelResponse(grid_, std::move(out));
}

ChannelResponse operator+(const ChannelResponse& a, const ChannelResponse& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<cplx> out(a.samples_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b.samples_[k];
    return ChannelResponse(a.grid_, std::move(out));
}

ChannelResponse operator-(const ChannelResponse& a, const ChannelResponse& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<cplx> out(a.samples_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b.samples_[k];
    return ChannelResponse(a.grid_, std::move(out));
}

ChannelResponse ChannelResponse::operator-() const {
    std::vector<cplx> out(samples_);
    for (auto& s : out) s = -s;
    return ChannelResponse(grid_, std::move(out));
}

RisConfig::RisConfig(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        if (b > 1) throw ConfigError("RIS configuration bits must be 0 or 1");
    }
}

RisConfig RisConfig::zeros(std::size_t length) { return RisConfig(std::vector<std::uint8_t>(length, 0)); }

RisConfig RisConfig::parse(std::string_view text, std::size_t length) {
    std::vector<std::uint8_t> bits;
    if (text.starts_with("0x") || text.starts_with("0X")) {
        for (char ch : text.substr(2)) {
            int v;
            if (ch >= '0' && ch <= '9') v = ch - '0';
            else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
            else throw ConfigError("RIS configuration: invalid hex digit '" + std::string(1, ch) + "'");
            for (int i = 3; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((v >> i) & 1));
        }
        if (length == 0) length = bits.size();
        if (length > bits.size()) throw ConfigError("RIS configuration: hex string too short");
        for (std::size_t i = length; i < bits.size(); ++i) {
            if (bits[i]) throw ConfigError("RIS configuration: hex padding bits must be zero");
        }
        bits.resize(length);
    } else {
        for (char ch : text) {
            if (ch != '0' && ch != '1') throw ConfigError("RIS configuration: expected bit string");
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        if (length != 0 && bits.size() != length)
            throw ConfigError("RIS configuration: expected " + std::to_string(length) + " bits, got " +
                              std::to_string(bits.size()));
    }
    return RisConfig(std::move(bits));
}

RisConfig RisConfig::complement() const {
    std::vector<std::uint8_t> out(bits_);
    for (auto& b : out) b ^= 1u;
    return RisConfig(std::move(out));
}

RisConfig RisConfig::with_bit(std::size_t l, std::uint8_t value) const {
    std::vector<std::uint8_t> out(bits_);
    out.at(l) = value;
    return RisConfig(std::move(out));
}

std::string RisConfig::to_bit_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
}

std::string RisConfig::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s = "0x";
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            v <<= 1;
            if (i + j < bits_.size()) v |= bits_[i + j];
        }
        s.push_back(digits[v]);
    }
    return s;
}

std::pair<std::size_t, std::size_t> band_indices(const FrequencyGrid& grid, const BandSelection& band) {
    if (!std::isfinite(band.center_hz) || !std::isfinite(band.bandwidth_hz) || band.bandwidth_hz < 0.0)
        throw EmptyBand("band selection: bandwidth must be finite and non-negative");
    const double step = grid.f_step();
    const double x_lo = (band.low() - grid.f_start()) / step;
    const double x_hi = (band.high() - grid.f_start()) / step;
    const double last = static_cast<double>(grid.size() - 1);
    if (x_lo < -0.5 || x_hi > last + 0.5)
        throw BandOutOfRange("band [" + std::to_string(band.low()) + ", " + std::to_string(band.high()) +
                             "] Hz exceeds grid span [" + std::to_string(grid.f_start()) + ", " +
                             std::to_string(grid.f_last()) + "] Hz");
    const double first = std::ceil(x_lo - 0.5);
    const double end = std::ceil(x_hi + 0.5);  // exclusive
    if (end <= first) throw EmptyBand("band selection contains no grid points");
    return {static_cast<std::size_t>(std::max(first, 0.0)),
            static_cast<std::size_t>(std::min(end, last + 1.0)) - 1};
}

ChannelResponse extract_band(const ChannelResponse& response, const BandSelection& band) {
    const auto& grid = response.grid();
    auto [first, last] = band_indices(grid, band);
    if (first == 0 && last + 1 == grid.size()) return response;
    auto s = response.samples();
    FrequencyGrid sub(grid.frequency(first), grid.f_step(), last - first + 1);
    return ChannelResponse(sub, std::vector<cplx>(s.begin() + static_cast<std::ptrdiff_t>(first),
                                                  s.begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

std::vector<double> magnitude_vector(const ChannelResponse& response) {
    std::vector<double> m(response.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::abs(response[k]);
    return m;
}

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
    if (!(a == b))
        throw GridMismatch("frequency grids differ (" + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()) + " points)");
}

}  // namespace atr
