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

// Spatial states of two atoms, each delocalised over the left/right wells of
// its double well. Two-atom operators act on the ordered basis
// (LL, LR, RL, RR), atom 1 being the leftmost.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "wgqed/error.hpp"

namespace wgqed {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

enum Branch : int { LL = 0, LR = 1, RL = 2, RR = 3 };

inline constexpr double normalization_tol = 1e-12;
inline constexpr double hermiticity_tol = 1e-12;
inline constexpr double trace_tol = 1e-12;
inline constexpr double positivity_tol = 1e-10;

struct SuperpositionState {
    cplx cL{1.0, 0.0};
    cplx cR{0.0, 0.0};

    double weight_left() const { return std::norm(cL); }
    double weight_right() const { return std::norm(cR); }
    double product() const { return std::norm(cL) * std::norm(cR); }
};

inline SuperpositionState make_superposition(cplx cL, cplx cR) {
    const double norm = std::norm(cL) + std::norm(cR);
    if (std::abs(norm - 1.0) > normalization_tol) {
        throw Error(ErrorKind::invalid_argument,
                    "superposition amplitudes are not normalised");
    }
    return {cL, cR};
}

/// |cL| and relative phase phi, cR = sqrt(1 - |cL|^2) e^{i phi}.
inline SuperpositionState superposition_from_polar(double cl_abs, double phase) {
    if (!(cl_abs >= 0.0 && cl_abs <= 1.0)) {
        throw Error(ErrorKind::invalid_argument, "|cL| must lie in [0, 1]");
    }
    return {cplx(cl_abs, 0.0), std::polar(std::sqrt(1.0 - cl_abs * cl_abs), phase)};
}

class TwoAtomState {
public:
    TwoAtomState() : rho_(Matrix4c::Zero()) { rho_(LL, LL) = 1.0; }

    /// Throws invalid_state unless rho is Hermitian, unit-trace and PSD.
    explicit TwoAtomState(const Matrix4c& rho) : rho_(rho) { validate(); }

    const Matrix4c& rho() const { return rho_; }
    double population(Branch b) const { return rho_(b, b).real(); }

    void validate() const {
        if (!rho_.allFinite()) {
            throw Error(ErrorKind::invalid_state, "density matrix has non-finite entries");
        }
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol) {
            throw Error(ErrorKind::invalid_state, "density matrix is not Hermitian");
        }
        const cplx tr = rho_.trace();
        if (std::abs(tr - 1.0) > trace_tol) {
            throw Error(ErrorKind::invalid_state, "density matrix trace differs from 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -positivity_tol) {
            throw Error(ErrorKind::invalid_state, "density matrix has a negative eigenvalue");
        }
    }

private:
    Matrix4c rho_;
};

/// Product amplitudes (cL1 cL2, cL1 cR2, cR1 cL2, cR1 cR2).
inline Vector4c product_amplitudes(const SuperpositionState& a, const SuperpositionState& b) {
    Vector4c v;
    v << a.cL * b.cL, a.cL * b.cR, a.cR * b.cL, a.cR * b.cR;
    return v;
}

inline TwoAtomState pure_state(const Vector4c& psi) {
    return TwoAtomState(psi * psi.adjoint());
}

/// Both atoms in the same superposition cL|L> + cR|R>.
inline TwoAtomState coherent_state(cplx cL, cplx cR) {
    const SuperpositionState s = make_superposition(cL, cR);
    return pure_state(product_amplitudes(s, s));
}

inline TwoAtomState coherent_state(const SuperpositionState& a, const SuperpositionState& b) {
    return pure_state(product_amplitudes(make_superposition(a.cL, a.cR),
                                         make_superposition(b.cL, b.cR)));
}

/// Incoherent counterpart with the same branch weights.
inline TwoAtomState mixture_state(double wL, double wR) {
    if (wL < 0.0 || wR < 0.0 || std::abs(wL + wR - 1.0) > normalization_tol) {
        throw Error(ErrorKind::invalid_argument, "mixture weights must be >= 0 and sum to 1");
    }
    Matrix4c rho = Matrix4c::Zero();
    rho(LL, LL) = wL * wL;
    rho(LR, LR) = wL * wR;
    rho(RL, RL) = wL * wR;
    rho(RR, RR) = wR * wR;
    return TwoAtomState(rho);
}

inline Matrix4c hadamard_pair() {
    Eigen::Matrix2cd h;
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    Matrix4c hh;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) hh(2 * i + k, 2 * j + l) = h(i, j) * h(k, l);
    return hh;
}

/// |L> -> (|L>+|R>)/sqrt2, |R> -> (|L>-|R>)/sqrt2 on both atoms.
inline TwoAtomState hadamard(const TwoAtomState& state) {
    static const Matrix4c hh = hadamard_pair();
    Matrix4c out = hh * state.rho() * hh.adjoint();
    // Restore exact Hermiticity lost to rounding.
    out = 0.5 * (out + out.adjoint()).eval();
    return TwoAtomState(out);
}

inline const Vector4c& psi_plus() {
    static const Vector4c v = [] {
        Vector4c p = Vector4c::Zero();
        p(LR) = p(RL) = 1.0 / std::sqrt(2.0);
        return p;
    }();
    return v;
}

inline const Vector4c& psi_minus() {
    static const Vector4c v = [] {
        Vector4c p = Vector4c::Zero();
        p(LR) = 1.0 / std::sqrt(2.0);
        p(RL) = -1.0 / std::sqrt(2.0);
        return p;
    }();
    return v;
}

/// <target|rho|target>.
inline double bell_overlap(const TwoAtomState& state, const Vector4c& target) {
    return std::max(0.0, (target.adjoint() * state.rho() * target)(0, 0).real());
}

/// Root fidelity sqrt(<target|rho|target>); for a pure product state with
/// identical atoms and target Psi+ this is sqrt(2)|cL cR|.
inline double root_fidelity(const TwoAtomState& state, const Vector4c& target) {
    return std::sqrt(bell_overlap(state, target));
}

}  // namespace wgqed
