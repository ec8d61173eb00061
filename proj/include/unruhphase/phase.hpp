// phase.hpp — geometric phase of the open two-level atom: adaptive quadrature
// of the analytic connection, its closed-form antiderivative, the first-order
// weak-coupling expansion, and a discrete parallel-transport extraction from
// sampled trajectories; plus the accelerated-minus-inertial phase difference.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "unruhphase/bath.hpp"
#include "unruhphase/dynamics.hpp"
#include "unruhphase/quadrature.hpp"

namespace unruhphase {

// Raised where the state is (numerically) fully mixed: the dominant
// eigenvector, and with it the geometric phase, is undefined there.
struct degeneracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PhaseMethod { quadrature, closed_form, first_order, kinematic };

inline const char* to_string(PhaseMethod m) {
    switch (m) {
        case PhaseMethod::quadrature: return "quadrature";
        case PhaseMethod::closed_form: return "closed_form";
        case PhaseMethod::first_order: return "first_order";
        case PhaseMethod::kinematic: return "kinematic";
    }
    return "?";
}

struct PhaseResult {
    double gamma{0.0};       // accumulated phase in radians, not wrapped
    PhaseMethod method{PhaseMethod::quadrature};
    double horizon{0.0};     // evolution time in units of 1/omega0
    AtomBathParams params{};
    bool fallback{false};    // closed form deferred to quadrature
    double error_estimate{0.0};
};

// Instantaneous eigen-decomposition of the closed-form state:
// lambda_pm = (1 +- eta)/2, and theta_tau parametrizes the dominant
// eigenvector as (sin(theta_tau/2), cos(theta_tau/2) e^{i Omega tau}) in the
// (excited, ground) basis. At tau = 0, theta_tau = pi - theta and the
// eigenvector is the initial pure state.
struct EigenFrame {
    double lambda_plus{1.0};
    double lambda_minus{0.0};
    double theta_tau{0.0};
};

namespace detail {

// theta within ~1 ulp of 0 or pi counts as an exact pole of the Bloch sphere,
// so boundary results (zero corrections, branch integrands) come out exact.
inline double snapped_sin(double theta) {
    const double s = std::sin(theta);
    return std::abs(s) < 1e-15 ? 0.0 : s;
}

constexpr double kEtaDegenerate = 1e-12;

}  // namespace detail

inline EigenFrame eigenframe(double tau_bar, double theta, const KossakowskiCoeffs& k) {
    const double s = detail::snapped_sin(theta);
    const double c = std::cos(theta);
    double rho3, trans2;  // longitudinal component and squared transverse component
    if (k.unitary) {
        rho3 = c;
        trans2 = s * s;
    } else {
        const double ep = std::exp(-4.0 * k.A * tau_bar);
        rho3 = ep * c + k.R * (ep - 1.0);
        trans2 = ep * s * s;
    }
    const double eta = std::hypot(rho3, std::sqrt(trans2));
    if (eta < detail::kEtaDegenerate)
        throw degeneracy_error("eigenframe: state fully mixed at tau_bar = " +
                               std::to_string(tau_bar));
    double theta_tau;
    if (trans2 == 0.0) {
        // Poles of the Bloch sphere; the limit of the mixing angle as the
        // transverse component vanishes.
        theta_tau = rho3 > 0.0 ? std::numbers::pi : 0.0;
    } else {
        // tan(theta_tau/2) = sqrt((eta + rho3)/(eta - rho3)); the smaller of
        // eta -+ rho3 is recovered from trans2 to avoid cancellation.
        double plus, minus;
        if (rho3 >= 0.0) {
            plus = eta + rho3;
            minus = trans2 / plus;
        } else {
            minus = eta - rho3;
            plus = trans2 / minus;
        }
        theta_tau = 2.0 * std::atan2(std::sqrt(plus), std::sqrt(minus));
    }
    return {0.5 * (1.0 + eta), 0.5 * (1.0 - eta), theta_tau};
}

// Connection integrand cos^2(theta_tau/2) = (1/2)(1 - rho3/eta), evaluated in
// the exponentially factored form; beyond 4 A tau = 300 the decayed branch
// takes over (the factored numerator is squared, so its headroom is e^{354}).
inline double phase_integrand(double tau_bar, double theta, const KossakowskiCoeffs& k) {
    const double s = detail::snapped_sin(theta);
    const double c = std::cos(theta);
    if (k.unitary) return 0.5 * (1.0 - c);  // frozen frame
    const double u = 4.0 * k.A * tau_bar;
    double ratio;
    if (u <= 300.0) {
        const double grow = std::exp(u);
        const double num = k.R - k.R * grow + c;       // = e^{4A tau} * rho3
        const double den = std::sqrt(grow * s * s + num * num);
        if (den < detail::kEtaDegenerate * grow)
            throw degeneracy_error("phase_integrand: state fully mixed at tau_bar = " +
                                   std::to_string(tau_bar));
        ratio = num / den;
    } else {
        const double ep = std::exp(-u);
        const double num = ep * (k.R + c) - k.R;
        ratio = num / std::hypot(num, std::sqrt(ep) * std::abs(s));
    }
    return 0.5 * (1.0 - ratio);
}

// gamma = -Omega * integral of cos^2(theta_tau/2) over `periods` quasi-cycles
// of length 2 pi / Omega, by adaptive quadrature to 1e-12 rad absolute.
inline PhaseResult phase_quadrature(const AtomBathParams& p, int periods,
                                    double omega_shift = 0.0) {
    if (periods < 0) throw std::invalid_argument("phase_quadrature: periods must be >= 0");
    const KossakowskiCoeffs k = kossakowski(p, omega_shift);
    const double T = 2.0 * std::numbers::pi / k.Omega;
    PhaseResult result{0.0, PhaseMethod::quadrature, periods * T, p, false, 0.0};
    if (periods == 0) return result;
    const double tol = 1e-12 / periods;
    double sum = 0.0, err = 0.0;
    for (int j = 0; j < periods; ++j) {
        const auto q = integrate_adaptive(
            [&](double t) { return phase_integrand(t, p.theta, k); }, j * T, (j + 1) * T, tol);
        sum += q.value;
        err += q.error;
    }
    result.gamma = -k.Omega * sum;
    result.error_estimate = k.Omega * err;
    return result;
}

namespace detail {

// Antiderivative increment F(phi2) - F(phi1) of -cos^2(theta_tau/2) in the
// evolution angle. Written in difference form (expm1/log1p on the
// increments): the plain antiderivative divides an O(A phi) log difference
// by 8A and would amplify rounding by 1/A. NaN signals that a square root or
// log argument left its domain by rounding; the caller falls back.
inline double phase_antiderivative_delta(double phi1, double phi2, double A, double R,
                                         double Q) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const double u1 = 4.0 * A * phi1;
    const double du = 4.0 * A * (phi2 - phi1);
    if (u1 + du > 300.0) return nan;  // e^{2u} headroom; quadrature covers this regime

    const double P = 1.0 - Q * Q - R * R;
    const double e41 = std::exp(u1);
    const double e81 = e41 * e41;
    const double em41 = std::exp(-u1);
    const double de4 = e41 * std::expm1(du);
    const double de8 = e81 * std::expm1(2.0 * du);
    const double dem4 = em41 * std::expm1(-du);

    // S^2 = R^2 e^{2u} + P e^{u} + Q^2, with S(0) = 1
    const double s1_sq = R * R * e81 + P * e41 + Q * Q;
    const double ds_sq = R * R * de8 + P * de4;
    if (!(s1_sq > 0.0) || !(s1_sq + ds_sq > 0.0)) return nan;
    const double s1 = std::sqrt(s1_sq);
    const double ds = ds_sq / (s1 + std::sqrt(s1_sq + ds_sq));

    // first log argument: P/(2R) + R e^{u} + S
    const double arg1 = P / (2.0 * R) + R * e41 + s1;
    const double darg1 = R * de4 + ds;

    // second log argument uses T = S e^{-u}: T^2 = R^2 + P e^{-u} + Q^2 e^{-2u}
    const double em42 = em41 + dem4;
    const double t1_sq = R * R + P * em41 + Q * Q * em41 * em41;
    const double dt_sq = dem4 * (P + Q * Q * (em41 + em42));
    if (!(t1_sq > 0.0) || !(t1_sq + dt_sq > 0.0)) return nan;
    const double t1 = std::sqrt(t1_sq);
    const double dt = dt_sq / (t1 + std::sqrt(t1_sq + dt_sq));

    const double aq = std::abs(Q);
    const double arg2 = P + 2.0 * Q * Q * em41 + 2.0 * aq * t1;
    const double darg2 = 2.0 * Q * Q * dem4 + 2.0 * aq * dt;

    if (!(arg1 > 0.0) || !(arg2 > 0.0)) return nan;
    const double r1 = darg1 / arg1;
    const double r2 = darg2 / arg2;
    if (!(r1 > -1.0) || !(r2 > -1.0)) return nan;
    const double sg = Q > 0.0 ? 1.0 : -1.0;
    return -0.5 * (phi2 - phi1) - (std::log1p(r1) + sg * std::log1p(r2)) / (8.0 * A);
}

}  // namespace detail

// Closed-form phase, summed per period to keep the accumulated value
// continuous. Defined for A > 0 and |R + cos(theta)| >= 1e-8; outside that
// (and on any log-domain rounding violation) it falls back to quadrature and
// reports the fallback flag instead of raising.
inline PhaseResult phase_closed_form(const AtomBathParams& p, int periods,
                                     double omega_shift = 0.0) {
    if (periods < 0) throw std::invalid_argument("phase_closed_form: periods must be >= 0");
    const KossakowskiCoeffs k = kossakowski(p, omega_shift);
    const double T = 2.0 * std::numbers::pi / k.Omega;
    const double Q = k.R + std::cos(p.theta);
    constexpr double q_min = 1e-8;

    auto fall_back = [&] {
        PhaseResult r = phase_quadrature(p, periods, omega_shift);
        r.method = PhaseMethod::closed_form;
        r.fallback = true;
        return r;
    };
    if (k.unitary || std::abs(Q) < q_min) return fall_back();

    double sum = 0.0;
    for (int j = 0; j < periods; ++j) {
        const double df = detail::phase_antiderivative_delta(j * T, (j + 1) * T, k.A, k.R, Q);
        if (std::isnan(df)) return fall_back();
        sum += df;
    }
    return {k.Omega * sum, PhaseMethod::closed_form, periods * T, p, false, 0.0};
}

// One-period phase to first order in gamma_ratio (exact at gamma_ratio = 0):
//   -pi(1 - cos t) - (pi^2/2) gamma (1 + abar^2) sin^2 t (2 + cos t coth(pi/abar)).
// The expansion loses accuracy for gamma_ratio above ~1e-2.
inline PhaseResult phase_first_order(const AtomBathParams& p) {
    p.validate();
    const double s = detail::snapped_sin(p.theta);
    const double c = std::cos(p.theta);
    const double pi = std::numbers::pi;
    double correction = 0.0;
    if (p.gamma_ratio > 0.0 && s != 0.0) {
        const double thermal = p.abar > 0.0 ? coth_positive(pi / p.abar) : 1.0;
        correction = 0.5 * pi * pi * p.gamma_ratio * s * s *
                     (1.0 + p.abar * p.abar) * (2.0 + c * thermal);
    }
    return {-pi * (1.0 - c) - correction, PhaseMethod::first_order, 2.0 * pi, p, false, 0.0};
}

struct PhaseDifference {
    double first_order{0.0};        // expansion of gamma_a - gamma_I, one period
    double exact{0.0};              // quadrature difference at equal theta
    double gamma_accelerated{0.0};  // quadrature value at abar
    double gamma_inertial{0.0};     // quadrature value at abar = 0
};

// Accelerated-minus-inertial phase difference after one quasi-cycle. The
// first-order form is
//   -(pi^2/2) gamma [abar^2 (2 + cos t) + (1 + abar^2) 2 cos t / (e^{2pi/abar}-1)] sin^2 t,
// vanishing at t in {0, pi} and growing with the acceleration.
inline PhaseDifference phase_difference(const AtomBathParams& p) {
    p.validate();
    const double s = detail::snapped_sin(p.theta);
    const double c = std::cos(p.theta);
    const double pi = std::numbers::pi;
    double first = 0.0;
    if (p.abar > 0.0 && p.gamma_ratio > 0.0 && s != 0.0) {
        const double a2 = p.abar * p.abar;
        const double planck2 = 2.0 / std::expm1(2.0 * pi / p.abar);
        first = -0.5 * pi * pi * p.gamma_ratio * s * s *
                (a2 * (2.0 + c) + (1.0 + a2) * planck2 * c);
    }
    AtomBathParams inertial = p;
    inertial.abar = 0.0;
    const PhaseResult ga = phase_quadrature(p, 1);
    const PhaseResult gi = phase_quadrature(inertial, 1);
    return {first, ga.gamma - gi.gamma, ga.gamma, gi.gamma};
}

namespace detail {

struct EigVec {
    std::complex<double> up, dn;  // components on (excited, ground)
};

// Dominant eigenvector of the state, in the smooth transverse-azimuth gauge.
inline EigVec plus_eigenvector(const DensityMatrix& s, double tau_bar) {
    const BlochVector b = to_bloch(s);
    const double rt = std::hypot(b.r1, b.r2);
    const double eta = std::hypot(rt, b.r3);
    if (eta < 1e-9)
        throw degeneracy_error("phase_kinematic: state within 1e-9 of full mixing at tau_bar = " +
                               std::to_string(tau_bar));
    double plus, minus;  // eta +- r3 without cancellation
    if (b.r3 >= 0.0) {
        plus = eta + b.r3;
        minus = rt > 0.0 ? rt * rt / plus : 0.0;
    } else {
        minus = eta - b.r3;
        plus = rt > 0.0 ? rt * rt / minus : 0.0;
    }
    const double cu = std::sqrt(plus / (2.0 * eta));
    const double sd = std::sqrt(minus / (2.0 * eta));
    if (rt == 0.0) return {{cu, 0.0}, {sd, 0.0}};
    return {{cu, 0.0}, {sd * b.r1 / rt, sd * b.r2 / rt}};
}

inline std::complex<double> overlap(const EigVec& a, const EigVec& b) {
    return std::conj(a.up) * b.up + std::conj(a.dn) * b.dn;
}

}  // namespace detail

// Geometric phase from a sampled trajectory: the connection integral is
// discretized as the sum of successive eigenvector overlap phases and closed
// with the endpoint overlap, which is gauge independent and converges at
// second order in the step. Needs at least 200 samples per precession
// period; an overlap magnitude below 0.5 between neighbors reports
// undersampling.
inline PhaseResult phase_kinematic(const Trajectory& traj) {
    if (traj.samples.size() < 2)
        throw std::invalid_argument("phase_kinematic: trajectory needs at least 2 samples");
    const double period = 2.0 * std::numbers::pi / traj.omega;
    if (!(traj.step <= period / 200.0))
        throw std::invalid_argument("phase_kinematic: need >= 200 samples per precession period");
    const double horizon = traj.samples.back().tau_bar - traj.samples.front().tau_bar;

    double max_trans = 0.0;
    for (const auto& s : traj.samples) max_trans = std::max(max_trans, std::abs(s.state.coh));
    if (max_trans == 0.0) {
        // Exactly diagonal trajectory: no transverse winding to track. By
        // continuity with sin(theta) -> 0 the ground-state branch carries the
        // full precession winding, the excited branch none.
        const bool below = traj.samples.front().state.rho_ee < 0.5;
        for (const auto& s : traj.samples) {
            const double r3 = 2.0 * s.state.rho_ee - 1.0;
            if ((r3 < 0.0) != below || std::abs(r3) < 1e-9)
                throw degeneracy_error("phase_kinematic: diagonal trajectory crosses full mixing");
        }
        const double gamma = below ? -traj.omega * horizon : 0.0;
        return {gamma, PhaseMethod::kinematic, horizon, {}, false, 0.0};
    }

    detail::EigVec first = detail::plus_eigenvector(traj.samples.front().state,
                                                    traj.samples.front().tau_bar);
    detail::EigVec prev = first;
    double connection = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const detail::EigVec cur =
            detail::plus_eigenvector(traj.samples[i].state, traj.samples[i].tau_bar);
        const std::complex<double> ov = detail::overlap(prev, cur);
        if (std::abs(ov) < 0.5)
            throw std::runtime_error(
                "phase_kinematic: eigenvector overlap below 0.5 between neighboring samples "
                "(trajectory undersampled near tau_bar = " +
                std::to_string(traj.samples[i].tau_bar) + ")");
        connection += std::arg(ov);
        prev = cur;
    }
    const double closure = std::arg(detail::overlap(first, prev));
    return {closure - connection, PhaseMethod::kinematic, horizon, {}, false, 0.0};
}

}  // namespace unruhphase
