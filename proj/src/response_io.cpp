#include "atr/response_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace atr::io {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'R', 'H'};

template <typename T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 8);
    std::uint64_t raw;
    std::memcpy(&raw, &value, 8);
    std::array<char, 8> buf;
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((raw >> (8 * i)) & 0xffu);
    out.write(buf.data(), 8);
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, 8> buf;
    if (!in.read(reinterpret_cast<char*>(buf.data()), 8)) throw FormatError("binary response: truncated input");
    std::uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    T value;
    std::memcpy(&value, &raw, 8);
    return value;
}

double parse_double(std::string_view field) {
    double v = 0.0;
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw FormatError("CSV response: cannot parse number '" + std::string(field) + "'");
    return v;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_csv(std::ostream& out, const ChannelResponse& response) {
    out << "f_hz,re,im\n";
    const auto& grid = response.grid();
    for (std::size_t k = 0; k < response.size(); ++k) {
        out << format_double(grid.frequency(k)) << ',' << format_double(response[k].real()) << ','
            << format_double(response[k].imag()) << '\n';
    }
}

ChannelResponse read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV response: empty input");
    if (line.starts_with("f_hz") == false) throw FormatError("CSV response: missing 'f_hz,re,im' header");
    std::vector<double> freqs;
    std::vector<cplx> samples;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::string_view sv(line);
        auto c1 = sv.find(',');
        auto c2 = sv.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            throw FormatError("CSV response: expected three columns");
        freqs.push_back(parse_double(sv.substr(0, c1)));
        samples.emplace_back(parse_double(sv.substr(c1 + 1, c2 - c1 - 1)), parse_double(sv.substr(c2 + 1)));
    }
    if (freqs.empty()) throw FormatError("CSV response: no samples");
    double step = 1.0;
    if (freqs.size() > 1) {
        step = (freqs.back() - freqs.front()) / static_cast<double>(freqs.size() - 1);
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            double expected = freqs.front() + static_cast<double>(k) * step;
            if (std::abs(freqs[k] - expected) > 1e-6 * step)
                throw FormatError("CSV response: frequency column is not a uniform grid");
        }
        // Prefer the exact step used by the writer when it is recoverable.
        if (double s1 = freqs[1] - freqs[0];
            std::abs(s1 - step) <= 1e-9 * step && freqs.front() + static_cast<double>(freqs.size() - 1) * s1 == freqs.back())
            step = s1;
    }
    return ChannelResponse(FrequencyGrid(freqs.front(), step, freqs.size()), std::move(samples));
}

void write_binary(std::ostream& out, const ChannelResponse& response) {
    out.write(kMagic.data(), kMagic.size());
    out.put(static_cast<char>(kBinaryVersion));
    put_le(out, response.grid().f_start());
    put_le(out, response.grid().f_step());
    put_le(out, static_cast<std::uint64_t>(response.grid().size()));
    for (const auto& s : response.samples()) {
        put_le(out, s.real());
        put_le(out, s.imag());
    }
}

ChannelResponse read_binary(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), 4) || magic != kMagic) throw FormatError("binary response: bad magic");
    int version = in.get();
    if (version != kBinaryVersion)
        throw FormatError("binary response: unsupported version " + std::to_string(version));
    const double f_start = get_le<double>(in);
    const double f_step = get_le<double>(in);
    const auto n = get_le<std::uint64_t>(in);
    if (n == 0 || n > (std::uint64_t{1} << 32)) throw FormatError("binary response: implausible point count");
    std::vector<cplx> samples(n);
    for (auto& s : samples) {
        double re = get_le<double>(in);
        double im = get_le<double>(in);
        s = {re, im};
    }
    return ChannelResponse(FrequencyGrid(f_start, f_step, n), std::move(samples));
}

void save(const std::filesystem::path& path, const ChannelResponse& response) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    if (path.extension() == ".csv") write_csv(out, response);
    else write_binary(out, response);
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

ChannelResponse load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    if (path.extension() == ".csv") return read_csv(in);
    return read_binary(in);
}

}  // namespace atr::io
