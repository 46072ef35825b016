// bath.hpp — spectral densities, bath correlation function, phonon transition
// rates, and Markov-validity diagnostics.
//
// Conventions. rate_gamma returns the golden-rule pair of Eq.-(9) form,
//   Gamma^-(w>0) = J(w)(coth(w/2T) + 1)   emission (enhanced),
//   Gamma^+(w>0) = J(w)(coth(w/2T) - 1)   absorption (suppressed),
// with the roles swapped for negative transition frequencies. correlation
// returns the thermal correlator normalized so that its half-Fourier transform
// reproduces these rates exactly:
//   2 Re \int_0^inf g(tau) e^{i w tau} dtau = Gamma^-(w).
// The master-equation memory kernel K(tau) = pi * g(tau) (see redfield.hpp).

#pragma once

#include "holosim/quadrature.hpp"
#include "holosim/system.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace holosim {

enum class SpectralKind { Ohmic, Superohmic, Mixed };

inline const char* spectral_kind_name(SpectralKind k) {
    switch (k) {
        case SpectralKind::Ohmic: return "ohmic";
        case SpectralKind::Superohmic: return "superohmic";
        default: return "mixed";
    }
}

struct SpectralDensity {
    SpectralKind kind = SpectralKind::Superohmic;
    double k1 = 0.0;       // ohmic coupling, dimensionless
    double k3 = 0.1;       // superohmic coupling [(meV)^-2]
    double omega_c = 0.5;  // Gaussian cutoff [meV]

    void validate() const {
        if (k1 < 0.0 || k3 < 0.0)
            throw std::invalid_argument("SpectralDensity: couplings must be >= 0");
        if (omega_c <= 0.0)
            throw std::invalid_argument("SpectralDensity: omega_c must be > 0");
        if (kind == SpectralKind::Mixed && (k1 <= 0.0 || k3 <= 0.0))
            throw std::invalid_argument("SpectralDensity: mixed bath requires k1 > 0 and k3 > 0");
    }

    // effective couplings after the kind switch
    double eff_k1() const { return kind == SpectralKind::Superohmic ? 0.0 : k1; }
    double eff_k3() const { return kind == SpectralKind::Ohmic ? 0.0 : k3; }
};

inline double spectral_density(const SpectralDensity& sd, double omega) {
    if (omega < 0.0)
        throw std::domain_error("spectral_density: omega must be >= 0 (rates handle signed frequencies)");
    const double x = omega / sd.omega_c;
    return (sd.eff_k1() * omega + sd.eff_k3() * omega * omega * omega) * std::exp(-x * x);
}

struct BathParams {
    SpectralDensity spectral;
    double temperature = 0.4;  // [meV], k_B = 1

    void validate() const {
        spectral.validate();
        if (temperature < 0.0)
            throw std::invalid_argument("BathParams: temperature must be >= 0");
    }
};

// --------------------------- correlation function ----------------------------

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    double domain_cutoffs = 8.0;  // integrate omega in [0, domain_cutoffs * omega_c]
};

// g(tau) = (1/pi) \int_0^inf J(w) [coth(w/2T) cos(w tau) - i sin(w tau)] dw.
// The Gaussian cutoff makes the domain effectively compact. T = 0 takes
// coth -> 1.
inline complexd correlation(const BathParams& bath, double tau,
                            const QuadratureConfig& q = {}) {
    bath.validate();
    if (!std::isfinite(tau)) throw std::invalid_argument("correlation: tau must be finite");
    const double wmax = q.domain_cutoffs * bath.spectral.omega_c;
    const double T = bath.temperature;
    const auto coth_half = [T](double w) {
        return T == 0.0 ? 1.0 : 1.0 / std::tanh(0.5 * w / T);
    };
    // scale for the absolute tolerance: peak of J * coth
    const double jpeak = spectral_density(bath.spectral, bath.spectral.omega_c) *
                         coth_half(bath.spectral.omega_c) /
                         std::exp(-1.0);
    const double atol = q.abs_tol * std::max(1.0, jpeak);
    const auto re = adaptive_integrate(
        [&](double w) {
            return w <= 0.0 ? 0.0
                            : spectral_density(bath.spectral, w) * coth_half(w) *
                                  std::cos(w * tau);
        },
        0.0, wmax, atol, q.rel_tol);
    const auto im = adaptive_integrate(
        [&](double w) {
            return w <= 0.0 ? 0.0 : -spectral_density(bath.spectral, w) * std::sin(w * tau);
        },
        0.0, wmax, atol, q.rel_tol);
    return complexd(re.value, im.value) / std::numbers::pi;
}

// ------------------------------ transition rates -----------------------------

struct RatePair {
    double plus;   // absorption-like
    double minus;  // emission-like
};

// Gamma^{+-}(w) for a signed transition frequency w = eps_n - eps_k. The w -> 0
// limit is 0 for the superohmic part and 2 k1 T for the ohmic part (the coth
// divergence cancels against J ~ w).
inline RatePair rate_gamma(const BathParams& bath, double omega_nk) {
    const double T = bath.temperature;
    const double aw = std::abs(omega_nk);
    // treat |w| below this as the degenerate limit; J's power law keeps it smooth
    if (aw < 1e-9) {
        const double g0 = 2.0 * bath.spectral.eff_k1() * T;
        return {g0, g0};
    }
    const double j = spectral_density(bath.spectral, aw);
    const double coth = T == 0.0 ? 1.0 : 1.0 / std::tanh(0.5 * aw / T);
    const double sgn = omega_nk > 0.0 ? 1.0 : -1.0;
    return {j * (coth - sgn), j * (coth + sgn)};
}

// ------------------------------- diagnostics --------------------------------

// Environment memory time tau_E ~ 1/(2 pi T).
inline double memory_time(const BathParams& bath) {
    if (bath.temperature <= 0.0)
        throw std::domain_error("memory_time: infinite memory time at T = 0");
    return 1.0 / (2.0 * std::numbers::pi * bath.temperature);
}

struct MarkovDiagnostics {
    double t_markov;    // T_M = k3 (Omega^2/eps)^3; NaN when not applicable
    double tau_d;       // density-matrix timescale (eps/Omega^2)^3 / k3
    bool applicable;    // false for a pure ohmic bath
};

inline MarkovDiagnostics markov_threshold(const SystemParams& sys, const SpectralDensity& sd) {
    const double w = sys.omega * sys.omega / sys.epsilon;
    if (sd.eff_k3() <= 0.0) {
        // pure ohmic: no k3 scale; report tau_D from the ohmic rate at w instead
        MarkovDiagnostics d;
        d.t_markov = std::numeric_limits<double>::quiet_NaN();
        const double rate = sd.eff_k1() > 0.0 ? 2.0 * sd.eff_k1() * w : 0.0;
        d.tau_d = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
        d.applicable = false;
        return d;
    }
    MarkovDiagnostics d;
    d.t_markov = sd.eff_k3() * w * w * w;
    d.tau_d = 1.0 / d.t_markov;
    d.applicable = true;
    return d;
}

} // namespace holosim
