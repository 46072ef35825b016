// redfield.hpp — rate tensor in the instantaneous dark/bright basis and the
// Born–Markov dissipator.
//
// The dissipator is the expansion of the memory integral in the instantaneous
// eigenbasis of the bare-frame Hamiltonian, with U(t-tau, t) ~ exp(i tau H(t)):
//   L(rho) = V ( X + X^dagger ) V^dagger,   X = a w+ rho' - w+ rho' a,
// where a = V^dagger A V, rho' = V^dagger rho V, and w+ is a elementwise-
// weighted by the one-sided transform of the memory kernel K(tau) = pi g(tau):
//   C(w_nk) = int_0^inf K(tau) e^{-i w_nk tau} dtau
//           = (pi/2) Gamma^+(w_nk) + i pi Lambda(w_nk).
// The principal-value part Lambda (a Lamb-type shift) is dropped by default
// and can be switched on for cross-validation against the memory-kernel
// solver. No secular approximation is applied: degenerate dark states make
// secular dropping ambiguous at w_nk = 0, and the ohmic degenerate-state
// physics lives in exactly those elements.

#pragma once

#include "holosim/bath.hpp"
#include "holosim/system.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace holosim {

// kernel normalization: K(tau) = pi * correlation(tau)
inline constexpr double memory_kernel_norm = std::numbers::pi;

// A in a dark/bright frame: V^dagger A V.
inline Matrix4cd coupling_in_darkbright(const DarkBrightBasis& basis) {
    return basis.vectors.adjoint() * coupling_operator() * basis.vectors;
}

struct RedfieldTensor {
    double time = 0.0;
    Matrix4cd basis;           // instantaneous eigenvectors (columns)
    Vector4d energies;         // matching eigenvalues
    Matrix4cd a_db;            // A in that basis
    Eigen::Matrix4d gamma_plus;   // Gamma^+(w_nk), Eq.-(9) rates
    Eigen::Matrix4d gamma_minus;  // Gamma^-(w_nk)
    Matrix4cd weight_plus;     // C(w_nk) * a_nk, kernel-normalized weights

    // Spec'd factorization Gamma^{+-}_{lmnk} = Gamma^{+-}(w_nk) K_{lmnk},
    // K_{lmnk} = a_lm a_nk.
    complexd gamma_plus_element(int l, int m, int n, int k) const {
        return gamma_plus(n, k) * a_db(l, m) * a_db(n, k);
    }
    complexd gamma_minus_element(int l, int m, int n, int k) const {
        return gamma_minus(n, k) * a_db(l, m) * a_db(n, k);
    }
};

// Optional precomputed Lamb-shift weights Lambda(w_nk) (imaginary part of the
// one-sided kernel transform, without the kernel norm). The transition
// frequencies are time independent along a loop, so this is computed once.
struct LambWeights {
    Eigen::Matrix4d lambda;  // Lambda(w_nk)
};

// Lambda(w) = Im int_0^W g(tau) e^{-i w tau} dtau by direct quadrature on the
// same window the memory-kernel solver uses.
inline LambWeights lamb_weights(const BathParams& bath, const Vector4d& energies, double window,
                                double dt, const QuadratureConfig& q = {}) {
    const int n = std::max(2, static_cast<int>(std::ceil(window / dt)));
    std::vector<complexd> g(n + 1);
    for (int j = 0; j <= n; ++j) g[j] = correlation(bath, j * dt, q);
    LambWeights lw;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double w = energies(a) - energies(b);
            complexd acc = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double wt = (j == 0 || j == n) ? 0.5 : 1.0;
                acc += wt * g[j] * std::exp(complexd(0.0, -w * j * dt));
            }
            lw.lambda(a, b) = (acc * dt).imag();
        }
    }
    return lw;
}

inline RedfieldTensor build_redfield_tensor(const BathParams& bath, const SystemParams& sys,
                                            double t,
                                            const LambWeights* lamb = nullptr) {
    RedfieldTensor rt;
    rt.time = t;
    const Matrix4cd h = hamiltonian(sys, t, Frame::Bare);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_redfield_tensor: eigendecomposition failed");
    rt.basis = es.eigenvectors();
    rt.energies = es.eigenvalues();
    rt.a_db = rt.basis.adjoint() * coupling_operator() * rt.basis;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const RatePair g = rate_gamma(bath, rt.energies(a) - rt.energies(b));
            rt.gamma_plus(a, b) = g.plus;
            rt.gamma_minus(a, b) = g.minus;
        }
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            complexd c(0.5 * memory_kernel_norm * rt.gamma_plus(a, b), 0.0);
            if (lamb) c.imag(memory_kernel_norm * lamb->lambda(a, b));
            rt.weight_plus(a, b) = c * rt.a_db(a, b);
        }
    }
    return rt;
}

// L(rho) in the computational basis; trace-free and Hermiticity-preserving by
// construction (X + X^dagger with a Hermitian and the weights paired by
// conjugation across +-w).
inline Matrix4cd dissipator(const Matrix4cd& rho, const RedfieldTensor& rt) {
    const Matrix4cd rho_db = rt.basis.adjoint() * rho * rt.basis;
    const Matrix4cd x =
        rt.a_db * rt.weight_plus * rho_db - rt.weight_plus * rho_db * rt.a_db;
    const Matrix4cd l_db = x + x.adjoint();
    return rt.basis * l_db * rt.basis.adjoint();
}

} // namespace holosim
