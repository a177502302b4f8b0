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

// Finite-bandwidth scattering: the two atomic amplitudes driven by a square
// single-photon pulse, with the inter-atomic propagation delay neglected.
// Time is in units of 1/gamma; with u = e^{i theta}
//
//   c1' = -(c1 + u c2) - e^{-i delta t} xi(t)
//   c2' = -(c2 + u c1) - e^{-i delta t} xi(t) u
//   N_ref(t) = int_0^t |c1 + u c2|^2
//
// Two solvers are provided. `solve_atomic` integrates the system with an
// adaptive Dormand-Prince stepper. `ModalSolution` solves it in closed form:
// the coupling matrix is diagonal in the symmetric/antisymmetric basis and
// the drive is constant on each side of the pulse edge, so each interval is
// a matrix exponential.

#pragma once

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/quadrature.hpp"

namespace wgqed {

using cplx = std::complex<double>;

/// Square pulse of bandwidth omega_ratio = Omega/gamma:
/// xi(t) = sqrt(Omega/2) on [0, 2/Omega], zero elsewhere; unit norm.
struct PulseSpec {
    double omega_ratio = 1.0;

    double duration() const { return 2.0 / omega_ratio; }
    double height() const { return std::sqrt(omega_ratio / 2.0); }
    double envelope(double t) const {
        return (t >= 0.0 && t <= duration()) ? height() : 0.0;
    }
};

inline PulseSpec make_pulse(double omega_ratio) {
    if (!(omega_ratio > 0.0) || !std::isfinite(omega_ratio)) {
        throw Error(ErrorKind::invalid_argument, "pulse bandwidth ratio must be positive");
    }
    return {omega_ratio};
}

inline double default_t_final(const PulseSpec& pulse) {
    return std::max(20.0, pulse.duration() + 20.0);
}

struct DynamicsResult {
    std::vector<double> times;
    std::vector<cplx> c_eg;
    std::vector<cplx> c_ge;
    std::vector<double> n_ref;
    double t2 = 0.0;
    double t_end = 0.0;  // where the run stopped (>= requested t_final)
};

struct AtomicOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    std::optional<double> t_final;  // default max(20, 2/Omega + 20)
    double sample_dt = 0.05;
    // Converged once |dN_ref/dt| and the remaining excitation are both
    // below this.
    double convergence_tol = 1e-10;
    // Keep integrating past t_final in chunks of 20/gamma until converged,
    // up to t_final + max_extension.
    bool auto_extend = true;
    double max_extension = 5000.0;
};

namespace detail {

using AtomicState = std::array<cplx, 3>;  // c1, c2, N_ref (real part)

struct AtomicRhs {
    double delta;
    cplx u;
    double drive;  // constant envelope on the current interval

    void operator()(const AtomicState& y, AtomicState& dy, double t) const {
        const cplx d = std::polar(drive, -delta * t);
        const cplx s = y[0] + u * y[1];
        dy[0] = -s - d;
        dy[1] = -(y[1] + u * y[0]) - d * u;
        dy[2] = cplx(std::norm(s), 0.0);
    }
};

inline double atomic_rate(const AtomicState& y, cplx u) { return std::norm(y[0] + u * y[1]); }

}  // namespace detail

inline DynamicsResult solve_atomic(const PulseSpec& pulse, double delta, double theta,
                                   const AtomicOptions& opt = {}) {
    namespace ode = boost::numeric::odeint;
    if (!(opt.rtol > 0.0) || !(opt.atol > 0.0) || !(opt.sample_dt > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "tolerances and sample step must be positive");
    }
    const PulseSpec p = make_pulse(pulse.omega_ratio);
    const double t_pulse = p.duration();
    const double t_final = opt.t_final.value_or(default_t_final(p));
    if (t_final < t_pulse) {
        throw Error(ErrorKind::invalid_argument, "t_final must not precede the pulse end");
    }
    const cplx u = std::polar(1.0, theta);

    DynamicsResult out;
    detail::AtomicState y{};
    auto record = [&](const detail::AtomicState& s, double t) {
        out.times.push_back(t);
        out.c_eg.push_back(s[0]);
        out.c_ge.push_back(s[1]);
        out.n_ref.push_back(s[2].real());
    };

    // Integrates [a, b] with a fresh stepper so the pulse edges are step
    // boundaries; samples every sample_dt (the first point only once).
    auto run_interval = [&](double a, double b, double drive, bool include_first) {
        if (b <= a) return;
        const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / opt.sample_dt)));
        std::vector<double> ts(steps + 1);
        for (int i = 0; i <= steps; ++i) ts[i] = a + (b - a) * i / steps;
        ts.back() = b;
        detail::AtomicRhs rhs{delta, u, drive};
        auto stepper = ode::make_dense_output(opt.atol, opt.rtol,
                                              ode::runge_kutta_dopri5<detail::AtomicState>());
        bool first = true;
        try {
            ode::integrate_times(stepper, rhs, y, ts.begin(), ts.end(),
                                 std::min(0.01, (b - a) / 4.0),
                                 [&](const detail::AtomicState& s, double t) {
                                     if (first && !include_first) {
                                         first = false;
                                         return;
                                     }
                                     first = false;
                                     record(s, t);
                                 });
        } catch (const std::exception& e) {
            throw Error(ErrorKind::step_failure, std::string("atomic integrator failed: ") + e.what());
        }
    };

    run_interval(0.0, t_pulse, p.height(), true);
    run_interval(t_pulse, t_final, 0.0, false);

    auto converged = [&] {
        const double exc = std::norm(y[0]) + std::norm(y[1]);
        return detail::atomic_rate(y, u) < opt.convergence_tol && exc < opt.convergence_tol;
    };
    double t_end = t_final;
    while (!converged()) {
        if (!opt.auto_extend || t_end >= t_final + opt.max_extension) {
            throw Error(ErrorKind::non_convergence,
                        "reflected photon number still changing at t = " + std::to_string(t_end));
        }
        run_interval(t_end, t_end + 20.0, 0.0, false);
        t_end += 20.0;
    }
    out.t_end = t_end;
    out.t2 = 1.0 - y[2].real();
    return out;
}

/// Closed-form solution of the delay-free atomic equations for one
/// (pulse, delta, theta). Amplitudes are kept in the frame rotating at the
/// probe detuning; `signal` is the reflected field c1 + u c2 in that frame.
class ModalSolution {
public:
    ModalSolution(const PulseSpec& pulse, double delta, double theta)
        : pulse_(make_pulse(pulse.omega_ratio)), delta_(delta), u_(std::polar(1.0, theta)) {
        const double s2 = std::sqrt(2.0);
        lambda_[0] = -(1.0 + u_) + cplx(0.0, delta_);
        lambda_[1] = -(1.0 - u_) + cplx(0.0, delta_);
        const double h = pulse_.height();
        drive_[0] = -h * (1.0 + u_) / s2;
        drive_[1] = -h * (1.0 - u_) / s2;
        coupling_[0] = (1.0 + u_) / s2;
        coupling_[1] = (1.0 - u_) / s2;
        const double tp = pulse_.duration();
        for (int k = 0; k < 2; ++k) end_of_pulse_[k] = drive_[k] * detail::expm1_over(lambda_[k], tp);
    }

    const PulseSpec& pulse() const { return pulse_; }
    double delta() const { return delta_; }

    /// Symmetric and antisymmetric mode amplitudes at time t.
    std::array<cplx, 2> modes(double t) const {
        const double tp = pulse_.duration();
        std::array<cplx, 2> m{};
        if (t <= 0.0) return m;
        for (int k = 0; k < 2; ++k) {
            m[k] = t <= tp ? drive_[k] * detail::expm1_over(lambda_[k], t)
                           : end_of_pulse_[k] * std::exp(lambda_[k] * (t - tp));
        }
        return m;
    }

    /// Lab-frame (c_eg, c_ge) at time t.
    std::array<cplx, 2> amplitudes(double t) const {
        const auto m = modes(t);
        const double s2 = std::sqrt(2.0);
        const cplx phase = std::polar(1.0, -delta_ * t);
        return {phase * (m[0] + m[1]) / s2, phase * (m[0] - m[1]) / s2};
    }

    /// c1 + u c2 in the rotating frame.
    cplx signal(double t) const {
        const auto m = modes(t);
        return coupling_[0] * m[0] + coupling_[1] * m[1];
    }

    /// int_0^t |signal|^2.
    double reflected(double t) const { return overlap_until(*this, *this, t).real(); }

    /// N_ref(infinity).
    double reflected_total() const { return overlap(*this, *this).real(); }

    double transmission() const { return 1.0 - reflected_total(); }

    /// int_0^t conj(b.signal) a.signal for two solutions sharing the pulse
    /// and detuning.
    static cplx overlap_until(const ModalSolution& a, const ModalSolution& b, double t) {
        const double tp = a.pulse_.duration();
        const double upper = std::min(t, tp);
        cplx acc = 0.0;
        if (upper > 0.0) acc += pulse_part(a, b, upper);
        if (t > tp) {
            acc += tail_part(a, b, t - tp);
        }
        return acc;
    }

    /// Same with t -> infinity, in closed form after the pulse.
    static cplx overlap(const ModalSolution& a, const ModalSolution& b) {
        check_compatible(a, b);
        return pulse_part(a, b, a.pulse_.duration()) + tail_part(a, b, -1.0);
    }

private:
    static void check_compatible(const ModalSolution& a, const ModalSolution& b) {
        if (a.pulse_.omega_ratio != b.pulse_.omega_ratio || a.delta_ != b.delta_) {
            throw Error(ErrorKind::invalid_argument,
                        "overlaps need solutions with the same pulse and detuning");
        }
    }

    static cplx pulse_part(const ModalSolution& a, const ModalSolution& b, double upper) {
        check_compatible(a, b);
        const double rate = 2.0 + std::abs(a.delta_);
        const int panels = std::max(1, static_cast<int>(std::ceil(upper * rate / 0.5)));
        return detail::integrate_panels(
            [&](double s) { return std::conj(b.signal(s)) * a.signal(s); }, 0.0, upper, panels);
    }

    // length < 0 integrates to infinity.
    static cplx tail_part(const ModalSolution& a, const ModalSolution& b, double length) {
        cplx acc = 0.0;
        for (int j = 0; j < 2; ++j) {
            const cplx ca = a.coupling_[j] * a.end_of_pulse_[j];
            for (int k = 0; k < 2; ++k) {
                const cplx cb = std::conj(b.coupling_[k] * b.end_of_pulse_[k]);
                const cplx coef = ca * cb;
                const cplx rate = a.lambda_[j] + std::conj(b.lambda_[k]);
                if (std::abs(coef) < 1e-300) continue;
                if (length >= 0.0) {
                    acc += coef * detail::expm1_over(rate, length);
                } else {
                    if (rate.real() > -1e-14) {
                        if (std::abs(coef) < 1e-20) continue;
                        throw Error(ErrorKind::non_convergence,
                                    "an undamped atomic mode keeps radiating");
                    }
                    acc += -coef / rate;
                }
            }
        }
        return acc;
    }

    PulseSpec pulse_;
    double delta_;
    cplx u_;
    std::array<cplx, 2> lambda_{};
    std::array<cplx, 2> drive_{};
    std::array<cplx, 2> coupling_{};
    std::array<cplx, 2> end_of_pulse_{};
};

/// Closed-form counterpart of solve_atomic, sampled on the same kind of
/// grid; t2 is the exact t -> infinity limit.
inline DynamicsResult solve_atomic_exact(const PulseSpec& pulse, double delta, double theta,
                                         std::optional<double> t_final = std::nullopt,
                                         double sample_dt = 0.05) {
    const ModalSolution sol(pulse, delta, theta);
    const double tp = sol.pulse().duration();
    const double tf = t_final.value_or(default_t_final(sol.pulse()));
    DynamicsResult out;
    auto sample = [&](double t, double nref) {
        const auto c = sol.amplitudes(t);
        out.times.push_back(t);
        out.c_eg.push_back(c[0]);
        out.c_ge.push_back(c[1]);
        out.n_ref.push_back(nref);
    };
    double nref = 0.0;
    double prev = 0.0;
    sample(0.0, 0.0);
    auto walk = [&](double a, double b) {
        const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / sample_dt)));
        for (int i = 1; i <= steps; ++i) {
            const double t = i == steps ? b : a + (b - a) * i / steps;
            nref += ModalSolution::overlap_until(sol, sol, t).real() -
                    ModalSolution::overlap_until(sol, sol, prev).real();
            prev = t;
            sample(t, nref);
        }
    };
    walk(0.0, tp);
    if (tf > tp) walk(tp, tf);
    out.t_end = tf;
    out.t2 = sol.transmission();
    return out;
}

/// Per-configuration t2 for a list of bandwidths, from the adaptive solver.
struct BandwidthRow {
    double omega_ratio = 0.0;
    double t2_d0 = 0.0;
    double t2_dplus = 0.0;
    double t2_dminus = 0.0;
};

inline std::vector<BandwidthRow> transmission_vs_bandwidth(const ConfigurationSet& cfg,
                                                           double delta,
                                                           std::span<const double> ratios,
                                                           const AtomicOptions& opt = {}) {
    std::vector<BandwidthRow> rows;
    rows.reserve(ratios.size());
    for (double r : ratios) {
        const PulseSpec p = make_pulse(r);
        AtomicOptions o = opt;
        o.sample_dt = std::max(opt.sample_dt, p.duration() / 2000.0);
        rows.push_back({r, solve_atomic(p, delta, cfg.theta_d0, o).t2,
                        solve_atomic(p, delta, cfg.theta_dplus, o).t2,
                        solve_atomic(p, delta, cfg.theta_dminus, o).t2});
    }
    return rows;
}

}  // namespace wgqed
