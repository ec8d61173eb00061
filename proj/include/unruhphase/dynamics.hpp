// dynamics.hpp — reduced two-level state, its closed-form evolution, and a
// fixed-step RK4 integrator of the master equation used as an independent
// numerical check of the closed form.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "unruhphase/bath.hpp"

namespace unruhphase {

// Hermitian unit-trace state stored as the excited population plus the upper
// off-diagonal element <e|rho|g>, so trace and Hermiticity hold by
// construction and only positivity remains a numerical condition.
struct DensityMatrix {
    double rho_ee{0.0};
    std::complex<double> coh{0.0, 0.0};

    // >= 0 for a positive semidefinite state.
    double positivity_margin() const { return rho_ee * (1.0 - rho_ee) - std::norm(coh); }
};

struct BlochVector {
    double r1{0.0}, r2{0.0}, r3{0.0};
};

// Sign convention: r1 = 2 Re coh, r2 = -2 Im coh, r3 = 2 rho_ee - 1,
// i.e. coh = (r1 - i r2)/2. The round trip is bit-exact.
inline BlochVector to_bloch(const DensityMatrix& s) {
    return {2.0 * s.coh.real(), -2.0 * s.coh.imag(), 2.0 * s.rho_ee - 1.0};
}

inline DensityMatrix from_bloch(const BlochVector& b) {
    return {0.5 * (1.0 + b.r3), {0.5 * b.r1, -0.5 * b.r2}};
}

// Pure state cos(theta/2)|e> + sin(theta/2)|g>. The population is taken from
// the half-angle identity so the equator gives exactly 1/2.
inline DensityMatrix initial_state(double theta) {
    return {0.5 * (1.0 + std::cos(theta)), {0.5 * std::sin(theta), 0.0}};
}

struct StateDerivative {
    double rho_ee{0.0};
    std::complex<double> coh{0.0, 0.0};
};

// Right-hand side of the master equation in the (rho_ee, coh) representation:
//   d rho_ee/dtau = -4A rho_ee + 2(A - B)
//   d coh/dtau    = -(2(2A + C) + i Omega) coh
// Populations relax toward rho_ee* = (1 - R)/2; coherence decays while
// precessing at Omega.
inline StateDerivative lindblad_rhs(const DensityMatrix& s, const KossakowskiCoeffs& k) {
    const std::complex<double> rate(2.0 * (2.0 * k.A + k.C), k.Omega);
    return {-4.0 * k.A * s.rho_ee + 2.0 * (k.A - k.B), -rate * s.coh};
}

// State at proper time tau_bar for the pure initial state with Bloch angle
// theta. The unitary branch is an exact code path, not a small-rate limit.
inline DensityMatrix rho_closed_form(double tau_bar, double theta, const KossakowskiCoeffs& k) {
    if (!(tau_bar >= 0.0)) throw std::domain_error("rho_closed_form: tau_bar must be >= 0");
    const double cos2 = 0.5 * (1.0 + std::cos(theta));  // cos^2(theta/2)
    const double phi = k.Omega * tau_bar;
    const std::complex<double> precession(std::cos(phi), -std::sin(phi));  // e^{-i Omega tau}
    if (k.unitary) return {cos2, 0.5 * std::sin(theta) * precession};
    const double ep = std::exp(-4.0 * k.A * tau_bar);
    const double ec = std::exp(-2.0 * (2.0 * k.A + k.C) * tau_bar);
    const double ee = ep * cos2 + 0.5 * (k.R - 1.0) * (ep - 1.0);
    return {ee, 0.5 * std::sin(theta) * ec * precession};
}

struct TrajectorySample {
    double tau_bar{0.0};
    DensityMatrix state{};
};

// Uniformly sampled evolution. Carries the Omega it was generated with so
// downstream phase extraction can resolve the free precession when the state
// is exactly diagonal.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    double step{0.0};
    double omega{1.0};
};

// Classical fixed-step RK4 for the (linear) master equation, from the pure
// initial state. Every stored sample is required to satisfy
// rho_ee(1-rho_ee) >= |coh|^2 - positivity_slack; a violation signals a
// step-size problem and throws.
inline Trajectory integrate_lindblad(double theta, const KossakowskiCoeffs& k,
                                     double tau_end, std::size_t steps,
                                     double positivity_slack = 1e-10) {
    if (steps < 100) throw std::invalid_argument("integrate_lindblad: steps must be >= 100");
    if (!(tau_end > 0.0)) throw std::invalid_argument("integrate_lindblad: tau_end must be > 0");

    const double h = tau_end / static_cast<double>(steps);
    Trajectory traj;
    traj.step = h;
    traj.omega = k.Omega;
    traj.samples.reserve(steps + 1);

    auto shifted = [](const DensityMatrix& s, const StateDerivative& d, double scale) {
        return DensityMatrix{s.rho_ee + scale * d.rho_ee, s.coh + scale * d.coh};
    };

    DensityMatrix y = initial_state(theta);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double tau = static_cast<double>(i) * h;
        if (y.positivity_margin() < -positivity_slack)
            throw std::runtime_error(
                "integrate_lindblad: positivity violated beyond slack at tau_bar = " +
                std::to_string(tau) + " (reduce the step size)");
        traj.samples.push_back({tau, y});
        if (i == steps) break;

        const StateDerivative k1 = lindblad_rhs(y, k);
        const StateDerivative k2 = lindblad_rhs(shifted(y, k1, 0.5 * h), k);
        const StateDerivative k3 = lindblad_rhs(shifted(y, k2, 0.5 * h), k);
        const StateDerivative k4 = lindblad_rhs(shifted(y, k3, h), k);
        y.rho_ee += h / 6.0 * (k1.rho_ee + 2.0 * k2.rho_ee + 2.0 * k3.rho_ee + k4.rho_ee);
        y.coh += h / 6.0 * (k1.coh + 2.0 * k2.coh + 2.0 * k3.coh + k4.coh);
    }
    return traj;
}

// Closed-form states on the same uniform grid (no integration error).
inline Trajectory sample_closed_form(double theta, const KossakowskiCoeffs& k,
                                     double tau_end, std::size_t steps) {
    if (steps < 1) throw std::invalid_argument("sample_closed_form: steps must be >= 1");
    if (!(tau_end > 0.0)) throw std::invalid_argument("sample_closed_form: tau_end must be > 0");
    const double h = tau_end / static_cast<double>(steps);
    Trajectory traj;
    traj.step = h;
    traj.omega = k.Omega;
    traj.samples.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double tau = static_cast<double>(i) * h;
        traj.samples.push_back({tau, rho_closed_form(tau, theta, k)});
    }
    return traj;
}

}  // namespace unruhphase
