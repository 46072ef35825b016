// evolve.hpp — density-matrix propagation under the Born–Markov master
// equation, plus the memory-kernel (non-Markovian) cross-validation solver.
//
// Markov stepping is a Strang split: exact midpoint eigen-exponential for the
// coherent half steps around a frozen-tensor dissipative update. Each half is
// exactly unitary, so the bath-off limit conserves trace, Hermiticity and
// purity to machine precision; the dissipative substep applies a short
// exponential series of the frozen superoperator.
//
// Both solvers evolve the bare-frame master equation (commutator with the
// bare Hamiltonian, dissipator from its instantaneous eigenbasis). Gate
// extraction against the nominal unitaries lives in the rotating frame
// instead; see propagator.hpp.

#pragma once

#include "holosim/propagator.hpp"
#include "holosim/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace holosim {

struct PositivityError : std::runtime_error {
    double time;
    double eigenvalue;
    PositivityError(double t, double ev)
        : std::runtime_error("positivity violation at t = " + std::to_string(t) +
                             ": min eigenvalue " + std::to_string(ev)),
          time(t),
          eigenvalue(ev) {}
};

struct IntegratorConfig {
    double dt = 0.0;                  // 0 -> auto: min(0.05/Omega, 0.05/Gamma_max)
    int order = 2;                    // Strang split, second order
    int positivity_check_every = 100; // steps between positivity checks
    double positivity_floor = -1e-7;  // warn below this eigenvalue
    double positivity_abort = -1e-4;  // abort below this eigenvalue
    bool lamb_shift = false;          // include the principal-value shift
    double window_factor = 10.0;      // memory window in units of tau_E
    double window = 0.0;              // absolute memory window; 0 -> auto
    int store_every = 0;              // 0: keep endpoints only
};

struct DensityCheck {
    double trace_error;
    double hermiticity_error;
    double min_eigenvalue;
};

inline DensityCheck check_density(const Matrix4cd& rho) {
    DensityCheck c;
    c.trace_error = std::abs(rho.trace() - complexd(1.0, 0.0));
    c.hermiticity_error = (rho - rho.adjoint()).norm();
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix4cd> states;  // sampled per store_every, final always last
    Matrix4cd final_state;
    int positivity_warnings = 0;
    double min_eigenvalue_seen = 0.0;
};

namespace detail {

// per-step data reused across trajectories with the same (sys, bath, cfg)
struct MarkovStep {
    Matrix4cd u_half;   // rotating-frame half-step exponential
    RedfieldTensor tensor;
};

struct MarkovSchedule {
    double dt;
    std::vector<MarkovStep> steps;
};

inline double max_rate(const BathParams& bath, const SystemParams& sys) {
    // transition frequencies are time independent; probe them at t = 0
    const RedfieldTensor rt = build_redfield_tensor(bath, sys, 0.0);
    double gmax = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            gmax = std::max(gmax, memory_kernel_norm * rt.gamma_minus(a, b));
    return gmax;
}

inline double auto_dt(const SystemParams& sys, const BathParams& bath) {
    const double gmax = max_rate(bath, sys);
    double dt = 0.05 / sys.omega;
    if (gmax > 0.0) dt = std::min(dt, 0.05 / gmax);
    return std::min(dt, sys.t_ad / 200.0);
}

inline double resolve_dt(const SystemParams& sys, const BathParams& bath,
                         const IntegratorConfig& cfg) {
    const double dt = cfg.dt > 0.0 ? cfg.dt : auto_dt(sys, bath);
    const double limit = 0.1 / std::max(sys.omega, max_rate(bath, sys));
    if (dt > limit)
        throw std::invalid_argument("IntegratorConfig: step " + std::to_string(dt) +
                                    " exceeds resolution limit " + std::to_string(limit));
    return dt;
}

inline MarkovSchedule build_markov_schedule(const SystemParams& sys, const BathParams& bath,
                                            const IntegratorConfig& cfg) {
    sys.validate();
    bath.validate();
    MarkovSchedule sch;
    const double dt = resolve_dt(sys, bath, cfg);
    const int nsteps = std::max(1, static_cast<int>(std::ceil(sys.t_ad / dt)));
    sch.dt = sys.t_ad / nsteps;
    sch.steps.reserve(nsteps);

    LambWeights lamb;
    bool use_lamb = cfg.lamb_shift;
    if (use_lamb) {
        const double window =
            cfg.window > 0.0
                ? cfg.window
                : (bath.temperature > 0.0 ? cfg.window_factor * memory_time(bath)
                                          : 12.0 / bath.spectral.omega_c);
        const RedfieldTensor probe = build_redfield_tensor(bath, sys, 0.0);
        lamb = lamb_weights(bath, probe.energies, window, sch.dt);
    }
    for (int k = 0; k < nsteps; ++k) {
        const double tm = (k + 0.5) * sch.dt;
        MarkovStep step;
        step.u_half = step_exponential(hamiltonian(sys, tm, Frame::Bare), 0.5 * sch.dt);
        step.tensor = build_redfield_tensor(bath, sys, tm, use_lamb ? &lamb : nullptr);
        sch.steps.push_back(std::move(step));
    }
    return sch;
}

// dissipative substep: rho <- exp(-h L) rho via a 2-term series (h L is tiny)
inline void apply_dissipative(Matrix4cd& rho, const RedfieldTensor& rt, double h) {
    const Matrix4cd l1 = dissipator(rho, rt);
    const Matrix4cd l2 = dissipator(l1, rt);
    rho -= h * l1;
    rho += (0.5 * h * h) * l2;
}

inline Trajectory evolve_with_schedule(const Matrix4cd& rho0, const MarkovSchedule& sch,
                                       const IntegratorConfig& cfg) {
    Trajectory traj;
    Matrix4cd rho = rho0;
    traj.times.push_back(0.0);
    traj.states.push_back(rho);
    const int n = static_cast<int>(sch.steps.size());
    for (int k = 0; k < n; ++k) {
        const MarkovStep& st = sch.steps[k];
        rho = st.u_half * rho * st.u_half.adjoint();
        apply_dissipative(rho, st.tensor, sch.dt);
        rho = st.u_half * rho * st.u_half.adjoint();
        const double t = (k + 1) * sch.dt;
        if (cfg.positivity_check_every > 0 &&
            ((k + 1) % cfg.positivity_check_every == 0 || k + 1 == n)) {
            Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
            const double mn = es.eigenvalues().minCoeff();
            traj.min_eigenvalue_seen = std::min(traj.min_eigenvalue_seen, mn);
            if (mn < cfg.positivity_abort) throw PositivityError(t, mn);
            if (mn < cfg.positivity_floor) ++traj.positivity_warnings;
        }
        if (cfg.store_every > 0 && (k + 1) % cfg.store_every == 0 && k + 1 < n) {
            traj.times.push_back(t);
            traj.states.push_back(rho);
        }
    }
    traj.times.push_back(sch.steps.size() * sch.dt);
    traj.states.push_back(rho);
    traj.final_state = rho;
    return traj;
}

} // namespace detail

inline Trajectory evolve_markov(const Matrix4cd& rho0, const SystemParams& sys,
                                const BathParams& bath, const IntegratorConfig& cfg = {}) {
    const auto sch = detail::build_markov_schedule(sys, bath, cfg);
    return detail::evolve_with_schedule(rho0, sch, cfg);
}

// ------------------------- memory-kernel solver ------------------------------

// Integro-differential evolution in the interaction picture of the rotating-
// frame drive, with the history integral discretized by the trapezoid rule
// over a window >= window_factor * tau_E. The memory kernel is
// K(tau) = pi * correlation(tau) and the interaction-picture coupling is
// built from the bare-frame gauge (see dissipator notes): A~(t) carries the
// static-spectrum phases exp(+-i w_nk t) on top of the adiabatic basis
// rotation, which is what the Markov tensor approximates.
inline Trajectory evolve_nonmarkov(const Matrix4cd& rho0, const SystemParams& sys,
                                   const BathParams& bath, const IntegratorConfig& cfg = {}) {
    sys.validate();
    bath.validate();
    const double dt = detail::resolve_dt(sys, bath, cfg);
    const int nsteps = std::max(1, static_cast<int>(std::ceil(sys.t_ad / dt)));
    const double h = sys.t_ad / nsteps;

    double window = cfg.window;
    if (window <= 0.0) {
        if (bath.temperature <= 0.0)
            throw std::invalid_argument(
                "evolve_nonmarkov: T = 0 has unbounded memory; set an explicit window");
        window = cfg.window_factor * memory_time(bath);
    }
    const int nw = std::min(nsteps, static_cast<int>(std::ceil(window / h)));

    // kernel samples on the tau grid
    std::vector<complexd> kernel(nw + 1);
    const bool bath_on = bath.spectral.eff_k1() > 0.0 || bath.spectral.eff_k3() > 0.0;
    for (int j = 0; j <= nw; ++j)
        kernel[j] = bath_on ? memory_kernel_norm * correlation(bath, j * h) : complexd(0.0, 0.0);
    if (bath_on && nw >= 2 && bath.temperature > 0.0) {
        // the window must cover the decay of Re g
        if (std::abs(kernel[nw].real()) > 0.02 * std::abs(kernel[0].real()))
            throw std::invalid_argument("evolve_nonmarkov: window too short for Re g decay");
    }

    // histories: interaction-picture coupling, state, and the products
    // P = A~ sigma, Q = sigma A~ entering the commutator form of the memory sum
    std::vector<Matrix4cd> a_hist(nsteps + 1), p_hist(nsteps + 1), q_hist(nsteps + 1);
    std::vector<Matrix4cd> sigma(nsteps + 1);
    Matrix4cd u = Matrix4cd::Identity();  // bare-frame propagator U(t, 0)
    const Matrix4cd a0 = coupling_operator();
    a_hist[0] = a0;
    sigma[0] = rho0;
    p_hist[0] = a0 * sigma[0];
    q_hist[0] = sigma[0] * a0;

    const auto rhs = [&](int idx) -> Matrix4cd {
        const int m = std::min(idx, nw);
        if (m == 0) return Matrix4cd::Zero();
        Matrix4cd sp = Matrix4cd::Zero();
        Matrix4cd sq = Matrix4cd::Zero();
        for (int j = 0; j <= m; ++j) {
            const double wt = (j == 0 || j == m) ? 0.5 : 1.0;
            sp += (wt * kernel[j]) * p_hist[idx - j];
            sq += (wt * std::conj(kernel[j])) * q_hist[idx - j];
        }
        const Matrix4cd d = sp - sq;
        const Matrix4cd& at = a_hist[idx];
        return -h * (at * d - d * at);
    };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    for (int k = 0; k < nsteps; ++k) {
        const double tm = (k + 0.5) * h;
        u = step_exponential(hamiltonian(sys, tm, Frame::Bare), h) * u;
        a_hist[k + 1] = u.adjoint() * a0 * u;
        // Heun predictor/corrector on the history integral
        const Matrix4cd f0 = rhs(k);
        sigma[k + 1] = sigma[k] + h * f0;
        p_hist[k + 1] = a_hist[k + 1] * sigma[k + 1];
        q_hist[k + 1] = sigma[k + 1] * a_hist[k + 1];
        const Matrix4cd f1 = rhs(k + 1);
        sigma[k + 1] = sigma[k] + 0.5 * h * (f0 + f1);
        p_hist[k + 1] = a_hist[k + 1] * sigma[k + 1];
        q_hist[k + 1] = sigma[k + 1] * a_hist[k + 1];
        if (cfg.store_every > 0 && (k + 1) % cfg.store_every == 0 && k + 1 < nsteps) {
            traj.times.push_back((k + 1) * h);
            traj.states.push_back(u * sigma[k + 1] * u.adjoint());
        }
    }
    traj.final_state = u * sigma[nsteps] * u.adjoint();
    traj.times.push_back(sys.t_ad);
    traj.states.push_back(traj.final_state);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(traj.final_state);
    traj.min_eigenvalue_seen = es.eigenvalues().minCoeff();
    return traj;
}

// ------------------------------ trajectory dump ------------------------------

// Columns: t, re(rho_ij) for i <= j row-major, im(rho_ij) for i < j, purity,
// dark-subspace population.
inline void trajectory_to_csv(const Trajectory& traj, const SystemParams& sys,
                              std::ostream& out) {
    out << "t";
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out << ",re_rho_" << i << j;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) out << ",im_rho_" << i << j;
    out << ",purity,dark_population\n";
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const Matrix4cd& rho = traj.states[n];
        const double t = std::min(traj.times[n], sys.t_ad);
        out << t;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) out << "," << rho(i, j).real();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) out << "," << rho(i, j).imag();
        const double purity = (rho * rho).trace().real();
        const DarkBrightBasis b = dark_bright_basis(sys, t);
        const double dark = (b.dark1().adjoint() * rho * b.dark1()).value().real() +
                            (b.dark2().adjoint() * rho * b.dark2()).value().real();
        out << "," << purity << "," << dark << "\n";
    }
}

} // namespace holosim
