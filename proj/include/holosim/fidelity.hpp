// fidelity.hpp — gate fidelity against the ideal evolution, averaged over a
// deterministic sample of initial states, and the two-rate decay fit.

#pragma once

#include "holosim/evolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace holosim {

// ------------------------------ initial states -------------------------------

// alpha |+> + beta |-> + eta |0>, |alpha|^2 + |beta|^2 + |eta|^2 = 1.
struct InitialState {
    complexd alpha;
    complexd beta;
    double eta;

    Vector4cd to_vector() const {
        Vector4cd v;
        v << 0.0, alpha, complexd(eta, 0.0), beta;
        return v;
    }
};

// Deterministic Fibonacci lattice on the logical Bloch sphere, scaled to norm
// sqrt(1 - eta_sq), with the leakage amplitude eta real.
inline std::vector<InitialState> sample_initial_states(int n, double eta_sq = 0.1) {
    if (n < 1) throw std::invalid_argument("sample_initial_states: n must be >= 1");
    if (eta_sq < 0.0 || eta_sq >= 1.0)
        throw std::invalid_argument("sample_initial_states: eta_sq must be in [0, 1)");
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double logical = std::sqrt(1.0 - eta_sq);
    std::vector<InitialState> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n;
        const double theta = std::acos(z);
        const double phi = golden_angle * k;
        InitialState s;
        s.alpha = logical * std::cos(0.5 * theta);
        s.beta = logical * std::sin(0.5 * theta) * std::exp(complexd(0.0, phi));
        s.eta = std::sqrt(eta_sq);
        out.push_back(s);
    }
    return out;
}

// -------------------------------- fidelity -----------------------------------

// F = sqrt(<psi_id| rho |psi_id>). Expectation values slightly outside [0, 1]
// (Redfield positivity artifacts) are clamped; beyond the artifact threshold
// this throws.
inline double fidelity(const Matrix4cd& rho_final, const Vector4cd& psi_ideal,
                       double artifact_threshold = 5e-2, int* clamp_warnings = nullptr) {
    const double nrm = psi_ideal.norm();
    if (std::abs(nrm - 1.0) > 1e-9)
        throw std::invalid_argument("fidelity: psi_ideal must be normalized");
    const double ev = (psi_ideal.adjoint() * rho_final * psi_ideal).value().real();
    if (ev < -artifact_threshold || ev > 1.0 + artifact_threshold)
        throw std::runtime_error("fidelity: expectation " + std::to_string(ev) +
                                 " outside [0,1] beyond artifact threshold");
    if (ev < -1e-9 || ev > 1.0 + 1e-9) {
        if (clamp_warnings) ++(*clamp_warnings);
    }
    return std::sqrt(std::clamp(ev, 0.0, 1.0));
}

struct FidelityResult {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<double> samples;
    int positivity_warnings = 0;
    int clamp_warnings = 0;
};

// Evolves each sample ideally and dissipatively from the same initial pure
// state and averages Eq.-(8) fidelities arithmetically (fixed order). The
// dissipative schedule is built once and reused across samples; the ideal
// reference is co-evolved with the same step exponentials, so the bath-off
// limit returns F = 1 to machine precision.
inline FidelityResult averaged_fidelity(const SystemParams& sys, const BathParams& bath,
                                        const std::vector<InitialState>& samples,
                                        const IntegratorConfig& cfg = {}) {
    if (samples.empty()) throw std::invalid_argument("averaged_fidelity: no samples");
    const auto sch = detail::build_markov_schedule(sys, bath, cfg);
    FidelityResult res;
    res.samples.reserve(samples.size());
    double acc = 0.0;
    for (const InitialState& s : samples) {
        const Vector4cd psi0 = s.to_vector();
        Matrix4cd rho = psi0 * psi0.adjoint();
        Vector4cd psi = psi0;
        const int n = static_cast<int>(sch.steps.size());
        for (int k = 0; k < n; ++k) {
            const auto& st = sch.steps[k];
            rho = st.u_half * rho * st.u_half.adjoint();
            detail::apply_dissipative(rho, st.tensor, sch.dt);
            rho = st.u_half * rho * st.u_half.adjoint();
            psi = st.u_half * (st.u_half * psi);
            if (cfg.positivity_check_every > 0 && (k + 1) % cfg.positivity_check_every == 0) {
                Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
                const double mn = es.eigenvalues().minCoeff();
                if (mn < cfg.positivity_abort) throw PositivityError((k + 1) * sch.dt, mn);
                if (mn < cfg.positivity_floor) ++res.positivity_warnings;
            }
        }
        const double f = fidelity(rho, psi, 5e-2, &res.clamp_warnings);
        res.samples.push_back(f);
        acc += f;
    }
    res.mean = acc / static_cast<double>(res.samples.size());
    res.min = *std::min_element(res.samples.begin(), res.samples.end());
    res.max = *std::max_element(res.samples.begin(), res.samples.end());
    return res;
}

// --------------------------------- decay fit ---------------------------------

// One observation for the decay-law fit: fidelity at rates Gamma^{+-} taken at
// the dark/bright gap Omega^2/eps for that grid point.
struct DecayPoint {
    double t_ad;
    double gamma_plus;
    double gamma_minus;
    double fidelity;
};

struct FitResult {
    double eta_plus = 0.0;
    double eta_minus = 0.0;
    double residual = 0.0;         // rms of (F_model - F) over the points
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
    bool quality_flag = false;     // set when residual exceeds quality_threshold
    double quality_threshold = 1e-2;
};

// Nonnegative least squares for F = 1 - t_ad (eta+ G+ + eta- G-): solve the
// 2x2 normal equations, clamping to the nonnegative quadrant via the active
// set (at most one variable clamps for a 2-variable problem).
inline FitResult fit_decay(const std::vector<DecayPoint>& points, double quality_threshold = 1e-2) {
    if (points.size() < 3) throw std::invalid_argument("fit_decay: need at least 3 points");
    Eigen::MatrixXd x(points.size(), 2);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        x(i, 0) = points[i].t_ad * points[i].gamma_plus;
        x(i, 1) = points[i].t_ad * points[i].gamma_minus;
        y(i) = 1.0 - points[i].fidelity;
    }
    const Eigen::Matrix2d xtx = x.transpose() * x;
    if (std::abs(xtx.determinant()) < 1e-30 * xtx.trace() * xtx.trace())
        throw std::runtime_error("fit_decay: singular design matrix (rates identical across points)");
    const Eigen::Vector2d xty = x.transpose() * y;
    Eigen::Vector2d eta = xtx.ldlt().solve(xty);
    const auto solve_single = [&](int active) {
        const double denom = xtx(active, active);
        double v = denom > 0.0 ? xty(active) / denom : 0.0;
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(active) = std::max(0.0, v);
        return e;
    };
    if (eta(0) < 0.0 && eta(1) < 0.0) {
        eta.setZero();
    } else if (eta(0) < 0.0) {
        eta = solve_single(1);
    } else if (eta(1) < 0.0) {
        eta = solve_single(0);
    }
    FitResult r;
    r.eta_plus = eta(0);
    r.eta_minus = eta(1);
    const Eigen::VectorXd resid = x * eta - y;
    r.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(points.size()));
    const double dof = std::max<double>(1.0, static_cast<double>(points.size()) - 2.0);
    const double sigma2 = resid.squaredNorm() / dof;
    r.covariance = sigma2 * xtx.inverse();
    r.quality_threshold = quality_threshold;
    r.quality_flag = r.residual > quality_threshold;
    return r;
}

} // namespace holosim
