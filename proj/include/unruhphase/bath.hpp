// bath.hpp — vacuum electromagnetic bath seen from a uniformly accelerated
// two-level atom: spectral density, detailed balance, Kossakowski decay
// coefficients, and the hyperbolic worldline. Natural units throughout:
// times in 1/omega0, rates in omega0, acceleration as abar = a/(c*omega0).

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "unruhphase/quadrature.hpp"

namespace unruhphase {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

// Dimensionless physical inputs.
struct AtomBathParams {
    double gamma_ratio{0.0};  // gamma0/omega0 >= 0; 0 selects the unitary branch
    double abar{0.0};         // a/(c*omega0) >= 0
    double theta{0.0};        // initial Bloch polar angle, in [0, pi]

    void validate() const {
        std::string bad;
        if (!(gamma_ratio >= 0.0) || !std::isfinite(gamma_ratio)) bad += " gamma_ratio";
        if (!(abar >= 0.0) || !std::isfinite(abar)) bad += " abar";
        if (!(theta >= 0.0 && theta <= std::numbers::pi)) bad += " theta";
        if (!bad.empty())
            throw std::invalid_argument("AtomBathParams: invalid field(s):" + bad);
    }
};

// Decay coefficients of the reduced two-level dynamics, in units of omega0.
// C = -A identically for this coupling; R = B/A = tanh(pi/abar) in (0, 1],
// reaching 1 in the inertial limit.
struct KossakowskiCoeffs {
    double A{0.0};
    double B{0.0};
    double C{0.0};
    double R{1.0};
    double Omega{1.0};    // effective level spacing; 1 unless a shift is supplied
    bool unitary{false};  // gamma_ratio == 0
};

// coth(x) for x > 0 without cancellation near coth = 1.
inline double coth_positive(double x) {
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

// Spectral density of the field correlation along the accelerated worldline,
// in units of gamma0, as a function of lambda_bar = lambda/omega0:
//   Ghat(l) = (1/2) l^3 (1 + abar^2/l^2) (1 + coth(pi l / abar)).
// The two signs of l are evaluated on separate stable branches so emission
// and absorption stay strictly positive and detailed balance is exact.
inline double spectral_density(double lambda_bar, double abar) {
    if (!(abar > 0.0))
        throw std::domain_error("spectral_density: abar must be > 0 (use inertial_limit)");
    if (lambda_bar == 0.0)
        throw std::domain_error("spectral_density: lambda_bar must be nonzero");
    const double l = std::abs(lambda_bar);
    const double base = 0.5 * l * l * l * (1.0 + abar * abar / (l * l));
    const double m = std::expm1(2.0 * std::numbers::pi * l / abar);
    return lambda_bar > 0.0 ? base * (2.0 + 2.0 / m) : base * (2.0 / m);
}

// Inertial (abar -> 0) limit: the flat-space cubic law, zero for lambda <= 0.
inline double inertial_limit(double lambda_bar) noexcept {
    return lambda_bar > 0.0 ? lambda_bar * lambda_bar * lambda_bar : 0.0;
}

// Detailed-balance quotient Ghat(-l)/Ghat(l); equals exp(-2 pi l / abar),
// the Boltzmann factor at the acceleration temperature.
inline double unruh_kms_ratio(double lambda_bar, double abar) {
    if (!(abar > 0.0)) throw std::domain_error("unruh_kms_ratio: abar must be > 0");
    if (!(lambda_bar > 0.0)) throw std::domain_error("unruh_kms_ratio: lambda_bar must be > 0");
    return spectral_density(-lambda_bar, abar) / spectral_density(lambda_bar, abar);
}

// Decay coefficients from the quarter sum/difference of the spectral density
// at the transition frequency. abar = 0 takes the exact inertial branch;
// gamma_ratio = 0 returns zero rates flagged as unitary. omega_shift is an
// optional level-spacing correction in units of omega0.
inline KossakowskiCoeffs kossakowski(const AtomBathParams& p, double omega_shift = 0.0) {
    p.validate();
    KossakowskiCoeffs k;
    k.Omega = 1.0 + omega_shift;
    if (p.abar > 0.0) {
        // tanh(pi/abar) through the non-overflowing exponential
        const double em = std::expm1(-2.0 * std::numbers::pi / p.abar);
        k.R = -em / (2.0 + em);
    }
    if (p.gamma_ratio == 0.0) {
        k.unitary = true;
        return k;
    }
    k.B = 0.25 * p.gamma_ratio * (1.0 + p.abar * p.abar);
    k.A = k.B / k.R;
    k.C = -k.A;
    return k;
}

// Event on the hyperbolic worldline, in units of c^2/a (ct likewise), so
// x^2 - (ct)^2 = 1 identically.
struct SpacetimePoint {
    double ct{0.0};
    double x{1.0};
    double y{0.0};
    double z{0.0};
};

inline SpacetimePoint rindler_trajectory(double tau_bar, double abar) {
    if (!(abar > 0.0)) throw std::domain_error("rindler_trajectory: abar must be > 0");
    const double s = abar * tau_bar;  // = a tau / c
    return {std::sinh(s), std::cosh(s), 0.0, 0.0};
}

// Laboratory time elapsed over tau_bar of proper time, in units of 1/omega0.
inline double lab_time(double tau_bar, double abar) {
    if (abar == 0.0) return tau_bar;
    if (!(abar > 0.0)) throw std::domain_error("lab_time: abar must be >= 0");
    return std::sinh(abar * tau_bar) / abar;
}

// Regulated bath correlation function along the worldline, normalized so that
// its Fourier transform over the proper-time lag reproduces spectral_density:
//   (3/16pi) abar^4 / sinh^4[(abar/2)(dtau - i eps)].
// Check-suite oracle only; the analytic transform is the production path.
inline std::complex<double> correlation_function(double dtau_bar, double abar, double eps) {
    if (!(abar > 0.0)) throw std::domain_error("correlation_function: abar must be > 0");
    if (!(eps > 0.0)) throw std::domain_error("correlation_function: eps must be > 0");
    const std::complex<double> s = std::sinh(std::complex<double>(
        0.5 * abar * dtau_bar, -0.5 * abar * eps));
    const std::complex<double> s2 = s * s;
    const double a2 = abar * abar;
    return (3.0 / (16.0 * std::numbers::pi)) * a2 * a2 / (s2 * s2);
}

// Windowed numeric Fourier transform of the regulated correlation function,
// for cross-checking spectral_density end to end. The window is split at the
// regulator scale so the near-singular peak at zero lag is resolved.
inline double spectral_density_from_correlation(double lambda_bar, double abar,
                                                double eps, double window) {
    if (!(window > 1.0)) throw std::invalid_argument("window must exceed the correlation time");
    const auto f = [&](double t) {
        const std::complex<double> phase(std::cos(lambda_bar * t), std::sin(lambda_bar * t));
        return phase * correlation_function(t, abar, eps);
    };
    const double cuts[] = {-window, -1.0, -10.0 * eps, 10.0 * eps, 1.0, window};
    std::complex<double> total{0.0, 0.0};
    for (int i = 0; i + 1 < 6; ++i)
        total += integrate_adaptive(f, cuts[i], cuts[i + 1], 1e-6, 400000).value;
    return total.real();
}

}  // namespace unruhphase
