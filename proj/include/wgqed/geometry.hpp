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

// Trap geometry: the periodic double-well potential and the three
// interatomic distances d0 = L, d+ = L + l, d- = L - l it produces for two
// atoms loaded n simple wells apart. Every length is carried as a
// dimensionless phase k*x at the probe carrier.

#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "wgqed/error.hpp"

namespace wgqed {

inline constexpr double pi = std::numbers::pi;

/// sin^2(x) + A^2 cos^2(2x), with x in units of 1/k_t.
inline double potential(double x, double amplitude) {
    const double s = std::sin(x);
    const double c = std::cos(2.0 * x);
    return s * s + amplitude * amplitude * c * c;
}

/// Reduces an angle into [0, pi).
inline double reduce_mod_pi(double angle) {
    double r = std::fmod(angle, pi);
    if (r < 0.0) r += pi;
    if (r >= pi) r -= pi;
    return r;
}

struct TrapGeometry {
    int n = 1;               // atoms start n simple wells apart
    double klt = pi / 2.0;   // k * l_t, double-well half separation
    double epsilon = 0.0;    // miscalibration: realised value is klt + epsilon
    double amplitude = 0.0;  // second-laser amplitude, descriptive only

    double effective_klt() const { return klt + epsilon; }
};

/// Checks the geometry invariants and returns a copy with klt reduced into
/// (0, pi).
inline TrapGeometry validated(TrapGeometry geom) {
    if (geom.n < 1) {
        throw Error(ErrorKind::invalid_argument,
                    "trap index n must be >= 1, got " + std::to_string(geom.n));
    }
    if (!std::isfinite(geom.klt) || !std::isfinite(geom.epsilon)) {
        throw Error(ErrorKind::invalid_argument, "klt and epsilon must be finite");
    }
    if (std::abs(geom.epsilon) >= pi / 4.0) {
        throw Error(ErrorKind::invalid_argument, "|epsilon| must be < pi/4");
    }
    if (geom.amplitude < 0.0) {
        throw Error(ErrorKind::invalid_argument, "amplitude must be >= 0");
    }
    geom.klt = reduce_mod_pi(geom.klt);
    if (geom.klt == 0.0) {
        throw Error(ErrorKind::invalid_argument, "klt must not be a multiple of pi");
    }
    return geom;
}

/// Configuration phases theta_d = k*d for the three interatomic distances.
struct ConfigurationSet {
    double theta_d0 = 0.0;
    double theta_dplus = 0.0;
    double theta_dminus = 0.0;
};

/// L = 2n*l is taken as exact; miscalibration enters only through epsilon.
inline ConfigurationSet configurations(const TrapGeometry& geom) {
    const TrapGeometry g = validated(geom);
    const double half = g.effective_klt();
    const double base = 2.0 * g.n * half;
    return {base, base + half, base - half};
}

/// True iff (klt + epsilon) mod pi lies within tol of pi/2.
inline bool is_n_independent(const TrapGeometry& geom, double tol) {
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
    }
    return std::abs(reduce_mod_pi(geom.effective_klt()) - pi / 2.0) <= tol;
}

}  // namespace wgqed
