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

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace wgqed::detail {

inline constexpr int gauss_order = 16;

struct GaussRule {
    std::array<double, gauss_order> nodes{};    // on [-1, 1]
    std::array<double, gauss_order> weights{};
};

/// Gauss-Legendre nodes by Newton iteration on P_n.
inline const GaussRule& gauss_legendre() {
    static const GaussRule rule = [] {
        GaussRule g;
        constexpr int n = gauss_order;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            g.nodes[i] = x;
            g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return g;
    }();
    return rule;
}

/// Integral of f over [a, b] with `panels` equal Gauss-Legendre panels.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels) {
    const GaussRule& g = gauss_legendre();
    using R = decltype(f(a));
    R acc{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        R part{};
        for (int i = 0; i < gauss_order; ++i) part += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        acc += 0.5 * h * part;
    }
    return acc;
}

/// (e^{z t} - 1) / z, continuous through z = 0.
inline std::complex<double> expm1_over(std::complex<double> z, double t) {
    const std::complex<double> zt = z * t;
    if (std::abs(zt) < 1e-4) {
        return t * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt * zt * zt / 24.0);
    }
    return (std::exp(zt) - 1.0) / z;
}

}  // namespace wgqed::detail
