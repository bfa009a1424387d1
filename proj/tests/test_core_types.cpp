#include <doctest.h>

#include <sstream>

#include "atr/core_types.hpp"
#include "atr/response_io.hpp"
#include "atr/seeding.hpp"

using namespace atr;

namespace {

ChannelResponse random_response(const FrequencyGrid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> s(g.size());
    for (auto& v : s) v = {rng.normal() * 1e3, rng.normal() * 1e-7};
    return ChannelResponse(g, s);
}

}  // namespace

TEST_CASE("frequency grid validates its inputs") {
    CHECK_THROWS_AS(FrequencyGrid(3e9, 0.0, 10), ConfigError);
    CHECK_THROWS_AS(FrequencyGrid(3e9, 1e6, 0), ConfigError);
    const FrequencyGrid g = FrequencyGrid::instrument_default();
    CHECK(g.size() == 7000);
    CHECK(g.f_start() == 3e9);
    CHECK(g.frequency(6999) == doctest::Approx(9.999e9));
}

TEST_CASE("20 MHz band at 4.79 GHz spans 21 bins from 4.780 to 4.800 GHz") {
    const FrequencyGrid g(3e9, 1e6, 7000);
    // independent count of bins with 4.780e9 <= f_k <= 4.800e9
    std::size_t expected = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double f = 3e9 + 1e6 * static_cast<double>(k);
        if (f >= 4.780e9 - 1.0 && f <= 4.800e9 + 1.0) ++expected;
    }
    REQUIRE(expected == 21);
    const auto h = random_response(g, 3);
    const auto band = extract_band(h, {4.79e9, 20e6});
    CHECK(band.size() == expected);
    CHECK(band.grid().f_start() == doctest::Approx(4.780e9));
    CHECK(band.grid().f_last() == doctest::Approx(4.800e9));
    CHECK(band[0] == h[1780]);
}

TEST_CASE("full-span band is the identity") {
    const FrequencyGrid g(4e9, 1e6, 500);
    const auto h = random_response(g, 4);
    const auto full = extract_band(h, BandSelection::full_span(g));
    CHECK(full == h);
    CHECK(magnitude_vector(full) == magnitude_vector(h));
}

TEST_CASE("bands outside the grid or with bad widths are rejected") {
    const FrequencyGrid g(3e9, 1e6, 7000);
    const auto h = random_response(g, 5);
    CHECK_THROWS_AS(extract_band(h, {2e9, 20e6}), BandOutOfRange);
    CHECK_THROWS_AS(extract_band(h, {9.995e9, 20e6}), BandOutOfRange);
    CHECK_THROWS_AS(extract_band(h, {5e9, -1.0}), EmptyBand);
    // a zero-width band is the single nearest bin
    CHECK(extract_band(h, {5e9, 0.0}).size() == 1);
}

TEST_CASE("magnitude vector") {
    const FrequencyGrid g(1e9, 1e6, 2);
    const auto m = magnitude_vector(ChannelResponse(g, {{3, 4}, {1, 0}}));
    CHECK(m == std::vector<double>{5.0, 1.0});
    CHECK(magnitude_vector(ChannelResponse::zeros(g)) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("responses reject non-finite samples and mismatched grids") {
    const FrequencyGrid g(1e9, 1e6, 2);
    CHECK_THROWS_AS(ChannelResponse(g, {{std::nan(""), 0}, {1, 0}}), InvalidResponse);
    CHECK_THROWS_AS(ChannelResponse(g, {{1, 0}}), InvalidResponse);
    const ChannelResponse a(g, {{1, 0}, {1, 0}});
    const ChannelResponse b(FrequencyGrid(1e9, 2e6, 2), {{1, 0}, {1, 0}});
    CHECK_THROWS_AS(a + b, GridMismatch);
}

TEST_CASE("RIS configuration parsing and rendering") {
    const auto c = RisConfig::parse("0110");
    CHECK(c.size() == 4);
    CHECK(c.bit(1) == 1);
    CHECK(c.reflection(0) == 1.0);
    CHECK(c.reflection(1) == -1.0);
    CHECK(c.to_bit_string() == "0110");
    CHECK(c.complement().to_bit_string() == "1001");
    CHECK(RisConfig::parse("0x6") == c);
    CHECK(RisConfig::parse("0x9184059e6081a4b0", 64).to_hex() == "0x9184059e6081a4b0");
    CHECK_THROWS_AS(RisConfig::parse("01x"), ConfigError);
    CHECK_THROWS_AS(RisConfig::parse("0101", 5), ConfigError);
    CHECK(RisConfig::parse("10101").to_hex() == "0xa8");
}

TEST_CASE("property: complement is an involution and flips every bit") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        std::vector<std::uint8_t> bits(1 + rng.index(100));
        for (auto& b : bits) b = rng.coin();
        const RisConfig c(bits);
        CHECK(c.complement().complement() == c);
        for (std::size_t l = 0; l < c.size(); ++l) CHECK(c.complement().bit(l) != c.bit(l));
        CHECK(RisConfig::parse(c.to_bit_string()) == c);
        CHECK(RisConfig::parse(c.to_hex(), c.size()) == c);
    }
}

TEST_CASE("property: CSV and binary round trips are lossless") {
    Rng rng(12);
    for (int t = 0; t < 25; ++t) {
        const FrequencyGrid g(rng.uniform(1e9, 5e9), rng.uniform(1e5, 5e6), 1 + rng.index(300));
        const auto h = random_response(g, rng.next());
        std::stringstream csv, bin;
        io::write_csv(csv, h);
        io::write_binary(bin, h);
        const auto from_csv = io::read_csv(csv);
        const auto from_bin = io::read_binary(bin);
        CHECK(from_bin == h);
        REQUIRE(from_csv.size() == h.size());
        for (std::size_t k = 0; k < h.size(); ++k) CHECK(from_csv[k] == h[k]);
        CHECK(from_csv.grid().f_start() == g.f_start());
        CHECK(from_csv.grid().f_step() == doctest::Approx(g.f_step()).epsilon(1e-9));
    }
}

TEST_CASE("binary reader rejects corrupt input") {
    std::stringstream bad("XXXX");
    CHECK_THROWS_AS(io::read_binary(bad), FormatError);
    const auto h = random_response(FrequencyGrid(1e9, 1e6, 4), 1);
    std::stringstream bin;
    io::write_binary(bin, h);
    auto bytes = bin.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(io::read_binary(truncated), FormatError);
    bytes[4] = 9;
    std::stringstream version(bytes);
    CHECK_THROWS_AS(io::read_binary(version), FormatError);
    std::stringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(io::read_csv(no_header), FormatError);
}

TEST_CASE("seed derivation is stable and sensitive to every key") {
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
    CHECK(derive_seed(7, "trials") != derive_seed(7, "calibration-noise"));
    // FNV-1a of the empty string is the offset basis
    CHECK(label_hash("") == 0xcbf29ce484222325ull);
    CHECK(label_hash("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("property: Rng variates have the expected moments") {
    Rng rng(99);
    const int n = 200000;
    double s = 0, s2 = 0, u = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s += x;
        s2 += x * x;
        u += rng.uniform();
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
    CHECK(std::abs(u / n - 0.5) < 0.005);
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
}
