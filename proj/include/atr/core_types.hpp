#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atr {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;

// Error hierarchy. Every failure raised by the library derives from atr::Error;
// ConfigError marks problems with user-supplied configuration (CLI exit code 2).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

#define ATR_DEFINE_ERROR(Name, Base)                         \
    class Name : public Base {                               \
    public:                                                  \
        explicit Name(const std::string& what) : Base(what) {} \
    }

ATR_DEFINE_ERROR(BandOutOfRange, Error);
ATR_DEFINE_ERROR(EmptyBand, Error);
ATR_DEFINE_ERROR(GridMismatch, Error);
ATR_DEFINE_ERROR(InvalidResponse, Error);
ATR_DEFINE_ERROR(FormatError, Error);

/// Uniform frequency grid f_k = f_start + k * f_step, k = 0 .. n_points-1.
class FrequencyGrid {
public:
    FrequencyGrid(double f_start_hz, double f_step_hz, std::size_t n_points);

    /// 3.0-10.0 GHz in 1 MHz steps, 7000 points.
    static FrequencyGrid instrument_default();

    double f_start() const noexcept { return f_start_; }
    double f_step() const noexcept { return f_step_; }
    std::size_t size() const noexcept { return n_points_; }

    double frequency(std::size_t k) const noexcept { return f_start_ + static_cast<double>(k) * f_step_; }
    double f_last() const noexcept { return frequency(n_points_ - 1); }
    double bandwidth() const noexcept { return f_step_ * static_cast<double>(n_points_ - 1); }
    double center() const noexcept { return 0.5 * (f_start_ + f_last()); }

    std::vector<double> frequencies() const;

    bool operator==(const FrequencyGrid&) const = default;

private:
    double f_start_;
    double f_step_;
    std::size_t n_points_;
};

struct BandSelection {
    double center_hz = 0.0;
    double bandwidth_hz = 0.0;

    double low() const noexcept { return center_hz - 0.5 * bandwidth_hz; }
    double high() const noexcept { return center_hz + 0.5 * bandwidth_hz; }

    /// The band that covers exactly the grid span.
    static BandSelection full_span(const FrequencyGrid& grid);

    bool operator==(const BandSelection&) const = default;
};

/// Complex channel gain samples on a frequency grid. Immutable after construction.
class ChannelResponse {
public:
    ChannelResponse(FrequencyGrid grid, std::vector<cplx> samples);

    static ChannelResponse zeros(const FrequencyGrid& grid);

    const FrequencyGrid& grid() const noexcept { return grid_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const cplx& operator[](std::size_t k) const noexcept { return samples_[k]; }

    ChannelResponse scaled(cplx factor) const;

    friend ChannelResponse operator+(const ChannelResponse& a, const ChannelResponse& b);
    friend ChannelResponse operator-(const ChannelResponse& a, const ChannelResponse& b);
    ChannelResponse operator-() const;

    bool operator==(const ChannelResponse&) const = default;

private:
    FrequencyGrid grid_;
    std::vector<cplx> samples_;
};

/// Binary RIS configuration. Bit 0 maps to reflection +1, bit 1 to -1.
class RisConfig {
public:
    RisConfig() = default;
    explicit RisConfig(std::vector<std::uint8_t> bits);
    static RisConfig zeros(std::size_t length);

    /// Parses "0101..." or "0x..." (hex carries 4 bits per digit, MSB first).
    static RisConfig parse(std::string_view text, std::size_t length = 0);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t bit(std::size_t l) const noexcept { return bits_[l]; }
    double reflection(std::size_t l) const noexcept { return bits_[l] ? -1.0 : 1.0; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    RisConfig complement() const;
    RisConfig with_bit(std::size_t l, std::uint8_t value) const;

    std::string to_bit_string() const;
    /// Bit string zero-padded on the right to a multiple of 4, rendered MSB-first.
    std::string to_hex() const;

    auto operator<=>(const RisConfig&) const = default;
    bool operator==(const RisConfig&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Contiguous sub-response whose bins fall within the band. A bin k belongs to
/// the band when low - f_step/2 <= f_k < high + f_step/2.
ChannelResponse extract_band(const ChannelResponse& response, const BandSelection& band);

/// Index range [first, last] used by extract_band.
std::pair<std::size_t, std::size_t> band_indices(const FrequencyGrid& grid, const BandSelection& band);

std::vector<double> magnitude_vector(const ChannelResponse& response);

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b);

}  // namespace atr
