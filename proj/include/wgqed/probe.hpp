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

// Monitoring a two-atom spatial superposition with a single probe photon.
//
// The transmission probability only sees the branch populations, so a
// coherent superposition and the matching statistical mixture give the same
// signal. The weight product |cL cR|^2 follows from one probe; the relative
// phase needs a second probe after a Hadamard on both atoms.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/state.hpp"

namespace wgqed {

struct BranchTransmissions {
    double d0 = 0.0;
    double dplus = 0.0;
    double dminus = 0.0;

    /// |t_d+|^2 + |t_d-|^2 - 2|t_d0|^2, the coefficient of |cL cR|^2.
    double key() const { return dplus + dminus - 2.0 * d0; }
};

inline BranchTransmissions branch_transmissions(const ConfigurationSet& cfg, double delta) {
    return {transmission2({delta, cfg.theta_d0}),
            transmission2({delta, cfg.theta_dplus}),
            transmission2({delta, cfg.theta_dminus})};
}

struct ProbeResult {
    double p_trans = 0.0;
    double key = 0.0;
};

inline ProbeResult transmission_probability(const TwoAtomState& state,
                                            const ConfigurationSet& cfg, double delta) {
    state.validate();
    const BranchTransmissions t = branch_transmissions(cfg, delta);
    const double p = state.population(LL) * t.d0 + state.population(LR) * t.dplus +
                     state.population(RL) * t.dminus + state.population(RR) * t.d0;
    return {p, t.key()};
}

struct WeightInference {
    double product = 0.0;  // |cL cR|^2, clamped to [0, 1/4]
    // The two branches of |cL|^2; (cL, cR) <-> (cR, cL) cannot be resolved.
    std::pair<double, double> weights{0.0, 1.0};
};

inline constexpr double default_inversion_tol = 1e-9;

/// Both solutions of |cL|^2 (1 - |cL|^2) = product, smaller first.
inline std::pair<double, double> weight_branches(double product) {
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * product));
    return {(1.0 - root) / 2.0, (1.0 + root) / 2.0};
}

inline WeightInference invert_weights(double p_trans, const ConfigurationSet& cfg, double delta,
                                      double tol = default_inversion_tol) {
    const BranchTransmissions t = branch_transmissions(cfg, delta);
    const double key = t.key();
    if (std::abs(key) < tol) {
        throw Error(ErrorKind::degenerate_probe,
                    "all configurations transmit alike at this detuning; the probe carries "
                    "no information about the weights");
    }
    const double raw = (p_trans - t.d0) / key;
    if (raw < -tol || raw > 0.25 + tol) {
        throw Error(ErrorKind::out_of_range,
                    "transmission probability is inconsistent with any superposition");
    }
    const double product = std::clamp(raw, 0.0, 0.25);
    return {product, weight_branches(product)};
}

struct PhaseInference {
    double abs_cos = 0.0;
    std::vector<double> candidates;  // in (-pi, pi], ascending
};

/// Recovers |cos(phi)| from the weight products before and after the
/// Hadamard. With cR/cL = |cR/cL| e^{i phi}, the post-Hadamard product is
/// ((|cL|^2 - |cR|^2)^2 + 4 |cL cR|^2 sin^2 phi) / 4; the weight difference
/// squared is 1 - 4 product_before on either weight branch.
inline PhaseInference extract_phase(double product_before, double product_after,
                                    double tol = default_inversion_tol) {
    if (product_before < -tol || product_before > 0.25 + tol || product_after < -tol ||
        product_after > 0.25 + tol) {
        throw Error(ErrorKind::inconsistent_data, "weight products must lie in [0, 1/4]");
    }
    const double before = std::clamp(product_before, 0.0, 0.25);
    const double after = std::clamp(product_after, 0.0, 0.25);
    if (before <= tol) {
        throw Error(ErrorKind::inconsistent_data,
                    "no superposition before the Hadamard; the relative phase is undefined");
    }
    const double sin2 = (4.0 * after - (1.0 - 4.0 * before)) / (4.0 * before);
    if (sin2 < -tol / before || sin2 > 1.0 + tol / before) {
        throw Error(ErrorKind::inconsistent_data,
                    "no relative phase reproduces the post-Hadamard product");
    }
    const double cos_abs = std::sqrt(std::clamp(1.0 - sin2, 0.0, 1.0));
    const double phi = std::acos(cos_abs);

    std::vector<double> raw = {phi, -phi, pi - phi, phi - pi};
    for (double& a : raw) {
        if (a <= -pi) a += 2.0 * pi;
        if (a > pi) a -= 2.0 * pi;
    }
    std::sort(raw.begin(), raw.end());
    std::vector<double> unique;
    for (double a : raw) {
        if (unique.empty() || std::abs(a - unique.back()) > 1e-12) unique.push_back(a);
    }
    return {cos_abs, unique};
}

/// Phases of the klt = pi/2 regime, where the spectra do not depend on n.
inline ConfigurationSet n_independent_configurations() {
    return configurations(TrapGeometry{1, pi / 2.0, 0.0, 0.0});
}

/// Gap between the equal-superposition and no-superposition probabilities,
/// |key|/4, in the n-independent regime.
inline double resolution(double delta) {
    return 0.25 * std::abs(branch_transmissions(n_independent_configurations(), delta).key());
}

inline std::vector<std::pair<double, double>> resolution_curve(std::span<const double> deltas) {
    std::vector<std::pair<double, double>> out;
    out.reserve(deltas.size());
    for (double d : deltas) out.emplace_back(d, resolution(d));
    return out;
}

/// Golden-section search for the resolution maximum inside [lo, hi].
inline double optimal_detuning(double lo = 1.1, double hi = 5.0, double tol = 1e-6) {
    if (!(hi > lo)) {
        throw Error(ErrorKind::invalid_argument, "search range must satisfy lo < hi");
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = resolution(c);
    double fd = resolution(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = resolution(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = resolution(d);
        }
    }
    const double x = 0.5 * (a + b);
    // A maximum pinned to an edge means the curve is monotone over the range.
    const double edge = 4.0 * tol;
    if (x - lo < edge || hi - x < edge) {
        throw Error(ErrorKind::no_maximum, "resolution curve has no interior maximum in range");
    }
    return x;
}

}  // namespace wgqed
