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

// Heralded extraction of (|LR> + |RL>)/sqrt2. The trap is tuned so that the
// d0 configurations (LL, RR) are fully transmitting at the probe detuning;
// a reflected photon then projects the atoms onto the d+/d- branches.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/grid.hpp"
#include "wgqed/pulse.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/state.hpp"

namespace wgqed {

struct HeraldPlan {
    double delta = 0.0;
    int n = 1;
    int branch = 0;
    double klt = 0.0;
    double leak = 0.0;  // max(|t_d+|^2, |t_d-|^2) at delta

    ConfigurationSet configurations() const {
        return wgqed::configurations(TrapGeometry{n, klt, 0.0, 0.0});
    }
};

/// Solves 2 n klt = -arctan(delta) + branch * pi for klt in (0, pi).
inline HeraldPlan plan(double delta, int n, int branch) {
    if (!std::isfinite(delta) || delta == 0.0) {
        throw Error(ErrorKind::zero_detuning,
                    "the transmission-peak condition is undefined at zero detuning");
    }
    if (n < 1) throw Error(ErrorKind::invalid_argument, "trap index n must be >= 1");
    HeraldPlan p;
    p.delta = delta;
    p.n = n;
    p.branch = branch;
    p.klt = reduce_mod_pi((-std::atan(delta) + branch * pi) / (2.0 * n));
    if (p.klt == 0.0) {
        throw Error(ErrorKind::domain, "heralding branch puts the wells on top of each other");
    }
    const ConfigurationSet cfg = p.configurations();
    p.leak = std::max(transmission2({delta, cfg.theta_dplus}),
                      transmission2({delta, cfg.theta_dminus}));
    return p;
}

/// Branch in {0, ..., 2n} with the smallest leak.
inline HeraldPlan best_plan(double delta, int n) {
    HeraldPlan best = plan(delta, n, 0);
    for (int b = 1; b <= 2 * n; ++b) {
        const HeraldPlan p = plan(delta, n, b);
        if (p.leak < best.leak) best = p;
    }
    return best;
}

/// Where reflected wavepackets are phase-referenced.
///
/// `first_atom` compares every branch in the frame of its own leftmost
/// atom, which is how the scattering amplitudes are defined. `lab` adds
/// the recoil phase e^{2 i k x1} of a common origin; the d+ and d- branches
/// then differ by e^{2 i klt} and reflection heralds the antisymmetric
/// state instead.
enum class PhaseReference { first_atom, lab };

/// Carrier phases (k x1, k x2) of the four branches, origin at the left
/// well of atom 1.
inline std::array<std::pair<double, double>, 4> branch_positions(const HeraldPlan& p) {
    const double l = p.klt;
    const double big = 2.0 * p.n * l;
    std::array<std::pair<double, double>, 4> pos{};
    pos[LL] = {0.0, big};
    pos[LR] = {0.0, big + l};
    pos[RL] = {l, big};
    pos[RR] = {l, big + l};
    return pos;
}

struct HeraldOutcome {
    double p_reflect = 0.0;
    TwoAtomState rho_cond;
    double fidelity = 0.0;          // root fidelity with Psi+
    double bell_overlap = 0.0;      // <Psi+|rho_cond|Psi+>
    double fidelity_initial = 0.0;  // root fidelity of the input state
    std::string warning;
};

inline constexpr double low_probability_threshold = 1e-6;

namespace detail {

/// rho_cond(c, c') = rho(c, c') gram(c, c') / p with gram(c, c') = <b_c'|b_c>.
inline HeraldOutcome condition(const TwoAtomState& state, const Matrix4c& gram) {
    HeraldOutcome out;
    out.fidelity_initial = root_fidelity(state, psi_plus());
    Matrix4c m = state.rho().cwiseProduct(gram);
    m = 0.5 * (m + m.adjoint()).eval();
    const double p = m.trace().real();
    out.p_reflect = std::clamp(p, 0.0, 1.0);
    if (p < low_probability_threshold) {
        out.warning = "heralding probability below 1e-6; conditioned state is numerically meaningless";
    }
    if (p > 1e-300) {
        m /= p;
        // Trace is exactly one up to rounding; bring it back before validation.
        m /= m.trace().real();
        out.rho_cond = TwoAtomState(m);
    } else {
        out.rho_cond = state;
    }
    out.bell_overlap = bell_overlap(out.rho_cond, psi_plus());
    out.fidelity = std::sqrt(out.bell_overlap);
    return out;
}

inline double reference_phase(PhaseReference ref, double x1) {
    return ref == PhaseReference::lab ? 2.0 * x1 : 0.0;
}

}  // namespace detail

/// Monochromatic limit: each branch is multiplied by its stationary
/// reflection amplitude.
inline HeraldOutcome herald_monochromatic(const TwoAtomState& state, const HeraldPlan& p,
                                          PhaseReference ref = PhaseReference::first_atom) {
    state.validate();
    const auto pos = branch_positions(p);
    Vector4c r;
    for (int c = 0; c < 4; ++c) {
        const double theta = pos[c].second - pos[c].first;
        r(c) = amplitudes({p.delta, theta}).r *
               std::polar(1.0, detail::reference_phase(ref, pos[c].first));
    }
    const Matrix4c gram = r * r.adjoint();
    return detail::condition(state, gram);
}

enum class HeraldRoute { atomic, grid };

struct HeraldOptions {
    HeraldRoute route = HeraldRoute::atomic;
    PhaseReference reference = PhaseReference::first_atom;
    GridSpec grid{};
};

/// Finite-bandwidth heralding: reflected wavepackets of the four branches
/// are overlapped either in time (closed-form atomic solution) or in
/// frequency (field-grid oracle). Branches sharing a separation share a
/// solve; their positions only change the reference phase.
inline HeraldOutcome herald_pulse(const TwoAtomState& state, const HeraldPlan& p,
                                  const PulseSpec& pulse, const HeraldOptions& opt = {}) {
    state.validate();
    const PulseSpec pl = make_pulse(pulse.omega_ratio);
    const auto pos = branch_positions(p);
    std::array<double, 4> theta{};
    std::array<cplx, 4> phase{};
    for (int c = 0; c < 4; ++c) {
        theta[c] = pos[c].second - pos[c].first;
        phase[c] = std::polar(1.0, detail::reference_phase(opt.reference, pos[c].first));
    }
    // Distinct separations, in branch order.
    std::array<int, 4> slot{};
    std::vector<double> unique;
    for (int c = 0; c < 4; ++c) {
        auto it = std::find_if(unique.begin(), unique.end(),
                               [&](double t) { return std::abs(t - theta[c]) < 1e-14; });
        if (it == unique.end()) {
            slot[c] = static_cast<int>(unique.size());
            unique.push_back(theta[c]);
        } else {
            slot[c] = static_cast<int>(it - unique.begin());
        }
    }

    const std::size_t k = unique.size();
    std::vector<std::vector<cplx>> base(k, std::vector<cplx>(k));
    if (opt.route == HeraldRoute::atomic) {
        std::vector<ModalSolution> sols;
        sols.reserve(k);
        for (double t : unique) sols.emplace_back(pl, p.delta, t);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) base[i][j] = ModalSolution::overlap(sols[i], sols[j]);
    } else {
        std::vector<FieldGridResult> runs;
        runs.reserve(k);
        for (double t : unique) runs.push_back(solve_grid(pl, p.delta, {0.0, t}, opt.grid));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) base[i][j] = spectral_overlap(runs[i], runs[j]);
    }

    Matrix4c gram;
    for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
            gram(c, d) = base[slot[c]][slot[d]] * phase[c] * std::conj(phase[d]);
    return detail::condition(state, gram);
}

struct FidelityRow {
    double omega_ratio = 0.0;
    double fidelity = 0.0;
    double fidelity_initial = 0.0;
    double p_reflect = 0.0;
};

inline std::vector<FidelityRow> fidelity_vs_bandwidth(const TwoAtomState& state,
                                                      const HeraldPlan& p,
                                                      std::span<const double> ratios,
                                                      const HeraldOptions& opt = {}) {
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 0.0) || (i > 0 && ratios[i] < ratios[i - 1])) {
            throw Error(ErrorKind::invalid_argument, "bandwidth ratios must be positive and sorted");
        }
    }
    std::vector<FidelityRow> rows;
    rows.reserve(ratios.size());
    for (double r : ratios) {
        const HeraldOutcome o = herald_pulse(state, p, PulseSpec{r}, opt);
        rows.push_back({r, o.fidelity, o.fidelity_initial, o.p_reflect});
    }
    return rows;
}

}  // namespace wgqed
