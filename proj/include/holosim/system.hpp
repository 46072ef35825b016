// system.hpp — driven four-level system: Rabi loops, Hamiltonian, dark/bright
// eigenstructure.
//
// Basis order throughout: (|G>, |+>, |0>, |->).
//
// Two gauges of the driven Hamiltonian are exposed:
//   Frame::Bare     — diagonal (0, eps, eps, eps), static couplings Omega_j(t).
//                     This is the frame with the static spectrum
//                     {eps_-, eps, eps, eps_+} of bright/dark states; the
//                     dissipator is built from its instantaneous eigenbasis.
//   Frame::Rotating — co-rotating with the resonant laser phase: the bare
//                     Hamiltonian minus eps on the excited triplet. Diagonal
//                     is zero; dark states sit at energy 0 and the bright
//                     doublet at +-Omega. Adiabatic gate extraction uses this
//                     frame (the drive is adiabatic with respect to the Omega
//                     gap, not the Omega^2/eps one).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace holosim {

using Matrix4cd = Eigen::Matrix4cd;
using Matrix2cd = Eigen::Matrix2cd;
using Vector4cd = Eigen::Vector4cd;
using Vector4d = Eigen::Vector4d;
using complexd = std::complex<double>;

enum class Gate { One, Two };

enum class Frame { Bare, Rotating };

inline const char* gate_name(Gate g) { return g == Gate::One ? "gate1" : "gate2"; }

// ----------------------------- parameters -----------------------------------

struct SystemParams {
    double epsilon = 1000.0;  // energy of the degenerate triplet [meV]
    double omega = 25.0;      // Rabi-vector norm [meV]
    double t_ad = 11.39451;   // loop (gating) time [hbar/meV]
    Gate gate = Gate::One;

    double alpha() const { return omega * t_ad; }

    // Throws on hard violations, returns soft warnings.
    std::vector<std::string> validate() const {
        if (epsilon <= 0.0) throw std::invalid_argument("SystemParams: epsilon must be > 0");
        if (omega <= 0.0) throw std::invalid_argument("SystemParams: omega must be > 0");
        if (t_ad <= 0.0) throw std::invalid_argument("SystemParams: t_ad must be > 0");
        std::vector<std::string> warnings;
        if (alpha() < 50.0)
            warnings.push_back("adiabatic parameter alpha = " + std::to_string(alpha()) +
                               " below 50; gate is far from adiabatic");
        if (omega / epsilon >= 0.5)
            warnings.push_back("omega/epsilon = " + std::to_string(omega / epsilon) +
                               " outside the omega << epsilon regime");
        return warnings;
    }
};

// Bright-state energies, eps_{+-} = (eps +- sqrt(eps^2 + 4 Omega^2))/2.
inline std::pair<double, double> bright_energies(const SystemParams& p) {
    const double root = std::sqrt(p.epsilon * p.epsilon + 4.0 * p.omega * p.omega);
    return {0.5 * (p.epsilon + root), 0.5 * (p.epsilon - root)};
}

// ------------------------------ Rabi loops ----------------------------------

struct RabiVector {
    complexd plus{};   // coupling |+> <-> |G>
    complexd minus{};  // coupling |-> <-> |G>
    complexd zero{};   // coupling |0> <-> |G>

    double squared_norm() const {
        return std::norm(plus) + std::norm(minus) + std::norm(zero);
    }
};

namespace detail {

// C1 ramp used on every loop leg.
inline double smoothstep(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * (3.0 - 2.0 * s);
}

// Gate 1 circuit on the (theta, phi) sphere of the {|+>,|0>} coupling pair:
// theta ramps to a dwell angle, phi sweeps while theta holds, theta ramps back.
// The traversed circuit encloses the geometric phase
//   sin^2(theta_dwell) * phi_sweep = pi/4,
// which puts e^{i pi/4} on the dark state that starts and ends at |+>; |->
// stays decoupled (Omega_- = 0 on this gate). The dwell angle trades gate
// speed against how strongly the moving dark state couples to the bath.
inline constexpr double gate1_dwell_theta = 0.47;
inline const double gate1_phi_sweep =
    (std::numbers::pi / 4.0) / (std::sin(gate1_dwell_theta) * std::sin(gate1_dwell_theta));

struct LoopPoint {
    double theta;
    double phi;
};

inline LoopPoint gate1_loop(double s) {
    const double th0 = gate1_dwell_theta;
    const double dphi = gate1_phi_sweep;
    if (s < 1.0 / 3.0) return {th0 * smoothstep(3.0 * s), 0.0};
    if (s < 2.0 / 3.0) return {th0, dphi * smoothstep(3.0 * s - 1.0)};
    return {th0 * (1.0 - smoothstep(3.0 * s - 2.0)), dphi};
}

// Gate 2: real tripod loop over the octant (|0> -> mix of |+>,|-> -> back),
// three great-circle legs with C1 ramps. The enclosed solid angle pi/2
// rotates the dark plane by pi/2: |+> -> |->, |-> -> -|+> (up to global
// phase), i.e. exp(i pi/2 sigma_y).
inline LoopPoint gate2_loop(double s) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (s < 1.0 / 3.0) return {half_pi * smoothstep(3.0 * s), 0.0};
    if (s < 2.0 / 3.0) return {half_pi, half_pi * smoothstep(3.0 * s - 1.0)};
    return {half_pi * (1.0 - smoothstep(3.0 * s - 2.0)), half_pi};
}

} // namespace detail

inline RabiVector rabi_vector(const SystemParams& p, double t) {
    if (t < 0.0 || t > p.t_ad)
        throw std::domain_error("rabi_vector: t outside [0, t_ad]");
    const double s = t / p.t_ad;
    RabiVector r;
    if (p.gate == Gate::One) {
        const auto [theta, phi] = detail::gate1_loop(s);
        r.plus = p.omega * std::sin(theta) * std::exp(complexd(0.0, phi));
        r.minus = 0.0;
        r.zero = p.omega * std::cos(theta);
    } else {
        const auto [theta, phi] = detail::gate2_loop(s);
        r.plus = p.omega * std::sin(theta) * std::cos(phi);
        r.minus = p.omega * std::sin(theta) * std::sin(phi);
        r.zero = p.omega * std::cos(theta);
    }
    return r;
}

// ------------------------------ Hamiltonian ---------------------------------

inline Matrix4cd hamiltonian(const SystemParams& p, double t, Frame frame = Frame::Bare) {
    const RabiVector r = rabi_vector(p, t);
    Matrix4cd h = Matrix4cd::Zero();
    if (frame == Frame::Bare) {
        h(1, 1) = h(2, 2) = h(3, 3) = p.epsilon;
    }
    h(1, 0) = r.plus;
    h(2, 0) = r.zero;
    h(3, 0) = r.minus;
    h(0, 1) = std::conj(r.plus);
    h(0, 2) = std::conj(r.zero);
    h(0, 3) = std::conj(r.minus);
    return h;
}

// System-bath coupling operator A = diag(0, 1, 0, -1).
inline Matrix4cd coupling_operator() {
    Matrix4cd a = Matrix4cd::Zero();
    a(1, 1) = 1.0;
    a(3, 3) = -1.0;
    return a;
}

// --------------------------- dark/bright basis -------------------------------

// Columns ordered (B+, B-, D1, D2); energies (eps_+, eps_-, eps, eps).
struct DarkBrightBasis {
    Matrix4cd vectors;
    Vector4d energies;

    Eigen::Ref<const Vector4cd> bright_plus() const { return vectors.col(0); }
    Eigen::Ref<const Vector4cd> bright_minus() const { return vectors.col(1); }
    Eigen::Ref<const Vector4cd> dark1() const { return vectors.col(2); }
    Eigen::Ref<const Vector4cd> dark2() const { return vectors.col(3); }
};

namespace detail {

// Aligns the dark pair (and bright phases) to maximize overlap with a
// reference 4x4 frame: polar factor of the overlap makes the gauge smooth.
inline Matrix4cd gauge_align(const Matrix4cd& vectors, const Matrix4cd& reference) {
    Matrix4cd aligned = vectors;
    // dark block: 2x2 unitary from the polar decomposition of <ref|new>
    Eigen::Matrix2cd overlap = reference.rightCols<2>().adjoint() * vectors.rightCols<2>();
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix2cd w = svd.matrixV() * svd.matrixU().adjoint();
    aligned.rightCols<2>() = vectors.rightCols<2>() * w;
    // bright columns: phase only
    for (int c = 0; c < 2; ++c) {
        complexd ov = reference.col(c).dot(aligned.col(c));
        if (std::abs(ov) > 1e-14) aligned.col(c) *= std::conj(ov) / std::abs(ov);
    }
    return aligned;
}

} // namespace detail

inline DarkBrightBasis dark_bright_basis(const SystemParams& p, double t,
                                         const DarkBrightBasis* reference = nullptr) {
    if (p.omega <= 0.0)
        throw std::invalid_argument("dark_bright_basis: Omega = 0 leaves the gate undefined");
    const Matrix4cd h = hamiltonian(p, t, Frame::Bare);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dark_bright_basis: eigendecomposition failed");

    // ascending eigenvalues: (eps_-, eps, eps, eps_+)
    DarkBrightBasis b;
    b.vectors.col(0) = es.eigenvectors().col(3);  // B+
    b.vectors.col(1) = es.eigenvectors().col(0);  // B-
    b.vectors.col(2) = es.eigenvectors().col(1);  // D1
    b.vectors.col(3) = es.eigenvectors().col(2);  // D2
    b.energies << es.eigenvalues()(3), es.eigenvalues()(0), es.eigenvalues()(1),
        es.eigenvalues()(2);

    if (reference) {
        b.vectors = detail::gauge_align(b.vectors, reference->vectors);
    } else {
        // canonical gauge: darks aligned with the logical states |+>, |->
        Matrix4cd ref = Matrix4cd::Zero();
        ref(2, 0) = 1.0;  // B+ ~ |0>-like at the loop base point
        ref(0, 1) = 1.0;  // B- ~ |G>-like
        ref(1, 2) = 1.0;  // D1 ~ |+>
        ref(3, 3) = 1.0;  // D2 ~ |->
        b.vectors = detail::gauge_align(b.vectors, ref);
    }
    return b;
}

} // namespace holosim
