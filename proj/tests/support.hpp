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

#pragma once

#include <cmath>
#include <random>

#include "wgqed/wgqed.hpp"

namespace wgqed::testkit {

/// Fixed-seed source of random single-atom superpositions.
class StateSource {
public:
    explicit StateSource(unsigned long long seed) : rng_(seed) {}

    SuperpositionState next() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_real_distribution<double> ph(-pi, pi);
        const double w = u(rng_);
        return {std::polar(std::sqrt(w), ph(rng_)), std::polar(std::sqrt(1.0 - w), ph(rng_))};
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

/// Random density matrix: a mixture of four random pure states.
inline TwoAtomState random_mixed(StateSource& src) {
    Matrix4c rho = Matrix4c::Zero();
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        Vector4c v;
        for (int i = 0; i < 4; ++i) v(i) = cplx(src.uniform(-1, 1), src.uniform(-1, 1));
        v.normalize();
        const double w = src.uniform(0.0, 1.0);
        rho += w * v * v.adjoint();
        total += w;
    }
    return TwoAtomState(rho / total);
}

}  // namespace wgqed::testkit
