#pragma once

// Independent reference computations used by the tests. Nothing here shares code
// with the library's precomputed bases or phasor recurrence.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "atr/enclosure.hpp"
#include "atr/ris_optimizer.hpp"

namespace oracle {

using atr::cplx;

inline cplx path(double f_hz, cplx amplitude, double length_m) {
    const double phase = -2.0 * std::numbers::pi * f_hz * length_m / atr::kSpeedOfLight;
    return amplitude * std::polar(1.0, phase);
}

// Direct per-bin evaluation of the first-order channel plus needle and coupling terms.
inline std::vector<cplx> channel(const atr::Enclosure& enc, const atr::RisConfig& config,
                                 const atr::TamperSpec* tamper, double time_s) {
    const auto& g = enc.grid;
    const double gamma = enc.path_gain;
    std::vector<atr::Vec3> needle;
    if (tamper) needle = atr::needle_points(enc, *tamper);
    std::vector<cplx> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double f = g.frequency(k);
        const double s = enc.ris.efficiency(f);
        const double d0 = atr::distance(enc.tx, enc.rx);
        cplx h = path(f, gamma / d0, d0);
        for (const auto& sc : enc.scatterers) {
            const double a = atr::distance(enc.tx, sc.position), b = atr::distance(sc.position, enc.rx);
            h += path(f, gamma * sc.amplitude / (a * b), a + b);
        }
        for (std::size_t l = 0; l < enc.ris.size(); ++l) {
            const auto& e = enc.ris.element_positions[l];
            const double r = config.bit(l) ? -1.0 : 1.0;
            const double a = atr::distance(enc.tx, e), b = atr::distance(e, enc.rx);
            h += path(f, r * s * gamma * enc.ris.element_gain[l] / (a * b), a + b);
            if (!tamper || enc.second_order_coupling == 0.0) continue;
            for (const auto& p : needle) {
                const double tp = atr::distance(enc.tx, p), pe = atr::distance(p, e), prx = atr::distance(p, enc.rx);
                const cplx base = r * s * gamma * enc.second_order_coupling * tamper->needle_amplitude *
                                  enc.ris.element_gain[l];
                h += path(f, base / (tp * pe * b), tp + pe + b);
                h += path(f, base / (a * pe * prx), a + pe + prx);
            }
        }
        for (const auto& p : needle) {
            const double a = atr::distance(enc.tx, p), b = atr::distance(p, enc.rx);
            h += path(f, gamma * tamper->needle_amplitude / (a * b), a + b);
        }
        if (enc.fan) {
            for (const auto& tip : enc.fan->blade_tips(time_s)) {
                const double a = atr::distance(enc.tx, tip), b = atr::distance(tip, enc.rx);
                h += path(f, gamma * enc.fan->blade_amplitude / (a * b), a + b);
            }
        }
        out[k] = h;
    }
    return out;
}

struct Minimum {
    atr::RisConfig config;
    double cost = std::numeric_limits<double>::infinity();
    std::vector<double> all;  // indexed by the integer whose bit l is element l
};

inline atr::RisConfig config_from_index(std::size_t index, std::size_t length) {
    std::vector<std::uint8_t> bits(length);
    for (std::size_t l = 0; l < length; ++l) bits[l] = static_cast<std::uint8_t>((index >> l) & 1u);
    return atr::RisConfig(bits);
}

inline Minimum exhaustive_minimum(const atr::CostFunction& cost, std::size_t length) {
    Minimum m;
    const std::size_t n = std::size_t{1} << length;
    m.all.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = config_from_index(i, length);
        m.all[i] = cost.evaluate(c);
        if (m.all[i] < m.cost) {
            m.cost = m.all[i];
            m.config = c;
        }
    }
    return m;
}

}  // namespace oracle
