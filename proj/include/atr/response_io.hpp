#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "atr/core_types.hpp"

namespace atr::io {

// CSV layout: header "f_hz,re,im", one row per bin. Doubles are written in
// shortest round-trip form, so samples survive a CSV round trip unchanged.
void write_csv(std::ostream& out, const ChannelResponse& response);
ChannelResponse read_csv(std::istream& in);

// Binary layout (little-endian): "ATRH", u8 version, f64 f_start, f64 f_step,
// u64 n_points, then n_points pairs of f64 (re, im).
inline constexpr std::uint8_t kBinaryVersion = 1;

void write_binary(std::ostream& out, const ChannelResponse& response);
ChannelResponse read_binary(std::istream& in);

void save(const std::filesystem::path& path, const ChannelResponse& response);
/// Dispatches on the ".csv" extension; anything else is read as binary.
ChannelResponse load(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace atr::io
