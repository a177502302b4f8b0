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

// What a miscalibrated trap does to the weight inference. The experimenter
// believes klt = pi/2 and inverts with the ideal spectra, while the atoms
// actually sit at klt = pi/2 + epsilon.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/probe.hpp"
#include "wgqed/scattering.hpp"

namespace wgqed {

inline constexpr double default_sensitivity_delta = 2.2;

/// Inferred |cL cR|^2 for a state whose true product is `true_product`.
/// Values outside the invertible range are clamped rather than rejected.
inline double inferred_product(double true_product, double epsilon, int n,
                               double delta = default_sensitivity_delta) {
    if (!(true_product >= 0.0 && true_product <= 0.25)) {
        throw Error(ErrorKind::invalid_argument, "true product must lie in [0, 1/4]");
    }
    const ConfigurationSet real =
        configurations(validated(TrapGeometry{n, pi / 2.0, epsilon, 0.0}));
    const BranchTransmissions t = branch_transmissions(real, delta);
    const double p_trans = t.d0 + t.key() * true_product;

    const BranchTransmissions ideal = branch_transmissions(n_independent_configurations(), delta);
    if (std::abs(ideal.key()) < default_inversion_tol) {
        throw Error(ErrorKind::degenerate_probe,
                    "all configurations transmit alike at this detuning; the probe carries "
                    "no information about the weights");
    }
    return std::clamp((p_trans - ideal.d0) / ideal.key(), 0.0, 0.25);
}

struct SensitivityGrid {
    int n = 1;
    double delta = default_sensitivity_delta;
    std::vector<double> epsilons;
    std::vector<double> true_products;
    std::vector<std::vector<double>> inferred;  // [epsilon][true product]

    /// Largest |inferred - true| along one epsilon row.
    double max_error(std::size_t row) const {
        double m = 0.0;
        for (std::size_t j = 0; j < true_products.size(); ++j) {
            m = std::max(m, std::abs(inferred[row][j] - true_products[j]));
        }
        return m;
    }
};

/// Epsilons span [-eps_max, eps_max] and true products [0, 1/4], both
/// endpoints included.
inline SensitivityGrid sensitivity_grid(int n, double eps_max, int eps_steps, int p_steps,
                                        double delta = default_sensitivity_delta) {
    if (!(eps_max >= 0.0 && eps_max < pi / 4.0)) {
        throw Error(ErrorKind::invalid_argument, "eps_max must lie in [0, pi/4)");
    }
    if (eps_steps < 1 || p_steps < 2) {
        throw Error(ErrorKind::invalid_argument, "need eps_steps >= 1 and p_steps >= 2");
    }
    SensitivityGrid g;
    g.n = n;
    g.delta = delta;
    g.epsilons = eps_steps == 1 ? std::vector<double>{0.0} : linspace(-eps_max, eps_max, eps_steps);
    g.true_products = linspace(0.0, 0.25, p_steps);
    g.inferred.reserve(g.epsilons.size());
    for (double e : g.epsilons) {
        std::vector<double> row;
        row.reserve(g.true_products.size());
        for (double p : g.true_products) row.push_back(inferred_product(p, e, n, delta));
        g.inferred.push_back(std::move(row));
    }
    return g;
}

}  // namespace wgqed
