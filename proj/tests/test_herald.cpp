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

#include <gtest/gtest.h>

#include "support.hpp"
#include "wgqed/herald.hpp"

using namespace wgqed;

namespace {

const HeraldPlan& fig_plan() {
    static const HeraldPlan p = plan(0.25, 1, 1);
    return p;
}

TwoAtomState equal_state() {
    const double a = 1.0 / std::sqrt(2.0);
    return coherent_state(a, a);
}

}  // namespace

TEST(Plan, FigureGeometry) {
    const HeraldPlan& p = fig_plan();
    EXPECT_NEAR(2.0 * p.klt, -std::atan(0.25) + pi, 1e-12);
    const ConfigurationSet cfg = p.configurations();
    EXPECT_NEAR(transmission2({0.25, cfg.theta_d0}), 1.0, 1e-12);
    EXPECT_LT(transmission2({0.25, cfg.theta_dplus}), 0.05);
    EXPECT_LT(transmission2({0.25, cfg.theta_dminus}), 0.05);
    EXPECT_NEAR(p.leak, std::max(transmission2({0.25, cfg.theta_dplus}),
                                 transmission2({0.25, cfg.theta_dminus})), 0.0);
}

TEST(Plan, ZeroDetuningRejected) {
    try {
        plan(0.0, 1, 1);
        FAIL() << "expected zero detuning error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::zero_detuning);
    }
    EXPECT_THROW(plan(0.3, 0, 1), Error);
}

TEST(Plan, PeakIdentityForRandomInputs) {
    testkit::StateSource src(61);
    for (int i = 0; i < 300; ++i) {
        double d = src.uniform(-10.0, 10.0);
        if (std::abs(d) < 1e-3) d = 0.5;
        const int n = 1 + i % 6;
        const int branch = i % (2 * n + 1);
        HeraldPlan p;
        try {
            p = plan(d, n, branch);
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::domain);
            continue;
        }
        EXPECT_GT(p.klt, 0.0);
        EXPECT_LT(p.klt, pi);
        EXPECT_NEAR(std::remainder(2.0 * n * p.klt + std::atan(d), pi), 0.0, 1e-12);
        EXPECT_NEAR(transmission2({d, p.configurations().theta_d0}), 1.0, 1e-12);
    }
}

TEST(Plan, BestBranchMinimisesLeak) {
    for (int n : {1, 2, 3}) {
        const HeraldPlan best = best_plan(0.25, n);
        for (int b = 0; b <= 2 * n; ++b) EXPECT_LE(best.leak, plan(0.25, n, b).leak);
    }
    EXPECT_EQ(best_plan(0.25, 1).branch, 1);
}

TEST(Monochromatic, EqualSuperposition) {
    const HeraldOutcome o = herald_monochromatic(equal_state(), fig_plan());
    EXPECT_GT(o.fidelity, 1.0 - 1e-5);
    EXPECT_NEAR(o.p_reflect, 0.5, fig_plan().leak);
    EXPECT_NEAR(o.fidelity_initial, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_TRUE(o.warning.empty());
}

TEST(Monochromatic, NoReflectingBranch) {
    const HeraldOutcome o = herald_monochromatic(coherent_state(1.0, 0.0), fig_plan());
    EXPECT_NEAR(o.p_reflect, 0.0, 1e-20);
    EXPECT_FALSE(o.warning.empty());
}

TEST(Monochromatic, FidelityIndependentOfWeights) {
    const double reference = herald_monochromatic(equal_state(), fig_plan()).fidelity;
    testkit::StateSource src(62);
    double yield = -1.0;
    for (int i = 0; i < 6; ++i) {
        SuperpositionState s = src.next();
        if (i == 0) s = superposition_from_polar(0.9798, 0.0);
        const HeraldOutcome o = herald_monochromatic(coherent_state(s.cL, s.cR), fig_plan());
        EXPECT_NEAR(o.fidelity, reference, 1e-9);
        const double y = o.p_reflect / (2.0 * s.product());
        if (yield < 0.0) yield = y;
        EXPECT_NEAR(y, yield, 1e-9);
    }
    // Ideal plan: yield 2|cL cR|^2 |r_d+-|^2.
    EXPECT_NEAR(yield, 1.0 - fig_plan().leak, 1e-6);
}

TEST(Monochromatic, LabFrameHeraldsAntisymmetricState) {
    // RL picks up e^{2 i klt} relative to LR; that is -1 only at klt = pi/2.
    const double l = fig_plan().klt;
    const HeraldOutcome lab = herald_monochromatic(equal_state(), fig_plan(), PhaseReference::lab);
    const HeraldOutcome own = herald_monochromatic(equal_state(), fig_plan());
    Vector4c u = Vector4c::Ones();
    u(RL) = u(RR) = std::polar(1.0, 2.0 * l);
    const Matrix4c expected = u.asDiagonal() * own.rho_cond.rho() * u.conjugate().asDiagonal();
    EXPECT_LT((lab.rho_cond.rho() - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(lab.p_reflect, own.p_reflect, 1e-12);
    EXPECT_GT(bell_overlap(lab.rho_cond, psi_minus()), 0.98);
}

TEST(Pulse, NarrowbandApproachesMonochromatic) {
    const HeraldOutcome mono = herald_monochromatic(equal_state(), fig_plan());
    const HeraldOutcome o = herald_pulse(equal_state(), fig_plan(), make_pulse(1e-3));
    EXPECT_NEAR(o.fidelity, mono.fidelity, 0.01);
    EXPECT_NEAR(o.p_reflect, mono.p_reflect, 0.01);
}

TEST(Pulse, CrossoverAtUnitBandwidth) {
    const HeraldOutcome o = herald_pulse(equal_state(), fig_plan(), make_pulse(1.0));
    EXPECT_NEAR(o.fidelity, 1.0 / std::sqrt(2.0), 0.02);
    EXPECT_NEAR(o.fidelity, o.fidelity_initial, 0.02);
}

TEST(Pulse, PostSelectionHelpsBelowUnitBandwidth) {
    const HeraldOutcome o = herald_pulse(equal_state(), fig_plan(), make_pulse(0.3));
    EXPECT_GT(o.fidelity, 1.0 / std::sqrt(2.0));
    EXPECT_LT(o.fidelity, 1.0);
}

TEST(Pulse, ConditionedStateIsValid) {
    testkit::StateSource src(63);
    for (int i = 0; i < 8; ++i) {
        const SuperpositionState s = src.next();
        const HeraldOutcome o =
            herald_pulse(coherent_state(s.cL, s.cR), fig_plan(), make_pulse(src.uniform(0.05, 5.0)));
        EXPECT_NO_THROW(o.rho_cond.validate());
        EXPECT_NEAR(o.rho_cond.rho().trace().real(), 1.0, 1e-12);
        EXPECT_GE(o.fidelity, 0.0);
        EXPECT_LE(o.fidelity, 1.0 + 1e-12);
        EXPECT_GE(o.p_reflect, 0.0);
        EXPECT_LE(o.p_reflect, 1.0);
    }
}

TEST(Pulse, GridRouteAgreesWithAtomicRoute) {
    HeraldOptions grid;
    grid.route = HeraldRoute::grid;
    const HeraldOutcome a = herald_pulse(equal_state(), fig_plan(), make_pulse(1.0));
    const HeraldOutcome g = herald_pulse(equal_state(), fig_plan(), make_pulse(1.0), grid);
    EXPECT_NEAR(g.fidelity, a.fidelity, 0.01);
    EXPECT_NEAR(g.p_reflect, a.p_reflect, 0.01);
}

TEST(Sweep, FidelityFallsWithBandwidth) {
    std::vector<double> ratios;
    for (double e : linspace(-2.0, 1.0, 31)) ratios.push_back(std::pow(10.0, e));
    const auto rows = fidelity_vs_bandwidth(equal_state(), fig_plan(), ratios);
    ASSERT_EQ(rows.size(), ratios.size());
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_LT(rows[k].fidelity, rows[k - 1].fidelity) << rows[k].omega_ratio;
        EXPECT_EQ(rows[k].fidelity_initial, rows[0].fidelity_initial);
    }
    for (const FidelityRow& r : rows) {
        if (r.omega_ratio < 0.95) {
            EXPECT_GT(r.fidelity, r.fidelity_initial) << r.omega_ratio;
        }
        if (r.omega_ratio > 1.15) {
            EXPECT_LT(r.fidelity, r.fidelity_initial) << r.omega_ratio;
        }
    }
}

TEST(Sweep, RejectsUnsortedRatios) {
    const std::vector<double> bad{1.0, 0.5};
    EXPECT_THROW(fidelity_vs_bandwidth(equal_state(), fig_plan(), bad), Error);
    const std::vector<double> neg{-1.0};
    EXPECT_THROW(fidelity_vs_bandwidth(equal_state(), fig_plan(), neg), Error);
}
