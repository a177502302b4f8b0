// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stationary (monochromatic) scattering of one photon by two atoms.
//
// Detuning is normalised to the waveguide emission rate, delta = (w0-wA)/g,
// and the atoms enter only through theta = k*d.

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"

namespace wgqed {

using cplx = std::complex<double>;

struct ScatterPoint {
    double delta = 0.0;
    double theta = 0.0;
};

/// Below this |delta| the transmission is the resonant-mirror limit 0.
inline constexpr double resonance_threshold = 1e-12;

/// |t_d|^2, evaluated in the printed (delta/gamma, 2 theta) form.
inline double transmission2(const ScatterPoint& p) {
    if (!std::isfinite(p.delta) || !std::isfinite(p.theta)) {
        throw Error(ErrorKind::invalid_argument, "scatter point must be finite");
    }
    if (std::abs(p.delta) < resonance_threshold) return 0.0;
    const double d2 = p.delta * p.delta;
    // -1 + cos 2theta written as -2 sin^2 theta to avoid cancellation near delta = 0.
    const double s = std::sin(p.theta);
    const double a = d2 - 2.0 * s * s;
    const double b = 2.0 * p.delta + std::sin(2.0 * p.theta);
    const double den = a * a + b * b;
    if (den == 0.0) {
        throw Error(ErrorKind::domain, "transmission denominator vanished at non-zero detuning");
    }
    return d2 * d2 / den;
}

inline double reflection2(const ScatterPoint& p) { return 1.0 - transmission2(p); }

/// Complex transmission and reflection amplitudes from the steady state of
/// the delay-free atomic equations. Both are referenced to the position of
/// the first (leftmost) atom: a reflected wave measured from another origin
/// picks up exp(2 i k x1).
struct ScatterAmplitudes {
    cplx t;
    cplx r;
};

inline ScatterAmplitudes amplitudes(const ScatterPoint& p) {
    const cplx u2 = std::polar(1.0, 2.0 * p.theta);
    const cplx one_minus = cplx(1.0, -p.delta);
    const cplx den = one_minus * one_minus - u2;
    if (std::abs(den) == 0.0) {
        // delta = 0 and theta = 0 mod pi: the two atoms act as one mirror.
        return {cplx(0.0), cplx(-1.0)};
    }
    const cplx t = -p.delta * p.delta / den;
    const cplx r = (u2 - 1.0 + cplx(0.0, p.delta) * (1.0 + u2)) / den;
    return {t, r};
}

struct SpectrumRow {
    double delta = 0.0;
    double t2_d0 = 0.0;
    double t2_dplus = 0.0;
    double t2_dminus = 0.0;
};

inline SpectrumRow spectrum_row(const ConfigurationSet& cfg, double delta) {
    return {delta,
            transmission2({delta, cfg.theta_d0}),
            transmission2({delta, cfg.theta_dplus}),
            transmission2({delta, cfg.theta_dminus})};
}

inline std::vector<SpectrumRow> spectrum(const ConfigurationSet& cfg,
                                         std::span<const double> deltas) {
    if (deltas.empty()) {
        throw Error(ErrorKind::invalid_argument, "spectrum needs at least one detuning");
    }
    std::vector<SpectrumRow> rows;
    rows.reserve(deltas.size());
    for (double d : deltas) rows.push_back(spectrum_row(cfg, d));
    return rows;
}

/// `points` uniformly spaced values over [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

}  // namespace wgqed
