// Bath-side checks: spectral density branches, detailed balance, decay
// coefficients against the independent quarter-sum route, worldline geometry,
// and the regulated correlation function.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "unruhphase/bath.hpp"

using namespace unruhphase;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("adaptive quadrature on known integrals") {
    const auto poly = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-13);
    CHECK(poly.value == Approx(1.0 / 3.0).margin(1e-13));
    const auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13);
    CHECK(sine.value == Approx(2.0).margin(1e-12));
    // oscillatory integrand needs real subdivision work
    const auto osc = integrate_adaptive([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0, 1e-12);
    CHECK(osc.value == Approx((1.0 - std::cos(40.0)) / 40.0).margin(1e-11));
    CHECK(osc.intervals > 1);
    // complex-valued integrand, full turn integrates to zero
    const auto turn = integrate_adaptive(
        [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); }, 0.0, 2.0 * kPi,
        1e-12);
    CHECK(std::abs(turn.value) < 1e-12);
}

TEST_CASE("adaptive quadrature reports non-convergence with its estimate") {
    try {
        integrate_adaptive([](double x) { return std::sin(1000.0 * x); }, 0.0, 10.0, 1e-14, 8);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(e.achieved_error > 1e-14);
        CHECK(std::string(e.what()).find("tolerance not reached") != std::string::npos);
    }
}

TEST_CASE("inertial limit is the signed cubic law") {
    CHECK(inertial_limit(1.0) == 1.0);
    CHECK(inertial_limit(-1.0) == 0.0);
    CHECK(inertial_limit(2.0) == 8.0);
    CHECK(inertial_limit(0.0) == 0.0);
}

TEST_CASE("spectral density matches the high-precision reference") {
    // (1/2)(17)(1 + coth(pi/4)), 50-digit evaluation
    CHECK(spectral_density(1.0, 4.0) == Approx(21.46138325998754420746).epsilon(1e-14));
    CHECK(spectral_density(1.0, 2.0) == Approx(5.225828526818420575075).epsilon(1e-14));
    // pointwise limit abar -> 0+ approaches the cubic law for positive frequency
    CHECK(spectral_density(1.0, 1e-2) == Approx(1.0).epsilon(1e-4));
    CHECK(spectral_density(-1.0, 1e-2) < 1e-200);
}

TEST_CASE("spectral density domain errors") {
    CHECK_THROWS_AS(spectral_density(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(spectral_density(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(spectral_density(0.0, 4.0), std::domain_error);
}

TEST_CASE("detailed balance at the acceleration temperature") {
    for (double l : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        for (double a : {0.5, 1.0, 4.0, 10.0}) {
            const double ratio = unruh_kms_ratio(l, a);
            CHECK(std::abs(ratio - std::exp(-2.0 * kPi * l / a)) < 1e-12);
        }
    }
    CHECK(unruh_kms_ratio(1.0, 2.0 * kPi) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(unruh_kms_ratio(2.0, 4.0) == Approx(std::exp(-kPi)).epsilon(1e-14));
    // Boltzmann suppression in the inertial limit
    CHECK(unruh_kms_ratio(1.0, 0.05) < 1e-54);
}

TEST_CASE("spectral density is strictly positive off zero") {
    for (double l : {-10.0, -2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0, 10.0})
        for (double a : {0.5, 1.0, 4.0, 10.0})
            CHECK(spectral_density(l, a) > 0.0);
}

TEST_CASE("kossakowski coefficients, inertial branch") {
    const KossakowskiCoeffs k = kossakowski({1e-6, 0.0, 0.3});
    CHECK(k.A == Approx(2.5e-7).epsilon(1e-15));
    CHECK(k.B == Approx(2.5e-7).epsilon(1e-15));
    CHECK(k.C == -k.A);
    CHECK(k.R == 1.0);
    CHECK(k.Omega == 1.0);
    CHECK_FALSE(k.unitary);
}

TEST_CASE("kossakowski coefficients, accelerated branch") {
    const KossakowskiCoeffs k = kossakowski({1e-6, 4.0, 0.3});
    // (1e-6/4)(17) coth(pi/4), 50-digit evaluation
    CHECK(k.A == Approx(6.480691629993772103729e-6).epsilon(1e-14));
    CHECK(k.B == Approx(4.25e-6).epsilon(1e-15));
    CHECK(k.R == Approx(0.6557942026326724356531).epsilon(1e-14));
    CHECK(k.C == -k.A);
}

TEST_CASE("unitary branch carries zero rates and the flag") {
    const KossakowskiCoeffs k = kossakowski({0.0, 4.0, 1.0});
    CHECK(k.unitary);
    CHECK(k.A == 0.0);
    CHECK(k.B == 0.0);
    CHECK(k.C == 0.0);
    CHECK(k.Omega == 1.0);
}

TEST_CASE("level-spacing shift feeds Omega") {
    CHECK(kossakowski({1e-6, 1.0, 0.0}, 2.5e-3).Omega == Approx(1.0025).epsilon(1e-15));
}

TEST_CASE("coefficients agree with the quarter sum/difference route") {
    for (double a : {0.5, 1.0, 4.0, 10.0}) {
        const double g = 1e-6;
        const KossakowskiCoeffs k = kossakowski({g, a, 0.0});
        const double As = 0.25 * g * (spectral_density(1.0, a) + spectral_density(-1.0, a));
        const double Bs = 0.25 * g * (spectral_density(1.0, a) - spectral_density(-1.0, a));
        CHECK(std::abs(As - k.A) / k.A < 1e-12);
        CHECK(std::abs(Bs - k.B) / k.B < 1e-12);
        CHECK(k.R == Approx(std::tanh(kPi / a)).epsilon(1e-12));
        CHECK(k.A >= k.B);
        CHECK(k.B > 0.0);
    }
}

TEST_CASE("stable coth has no cancellation at small abar") {
    CHECK(coth_positive(kPi / 1e-3) == 1.0);  // exact saturation
    CHECK(coth_positive(0.5) == Approx(1.0 / std::tanh(0.5)).epsilon(1e-15));
    // R stays in (0, 1] down to tiny abar
    CHECK(kossakowski({1e-6, 1e-3, 0.0}).R == 1.0);
}

TEST_CASE("hyperbolic worldline") {
    const SpacetimePoint p0 = rindler_trajectory(0.0, 1.0);
    CHECK(p0.ct == 0.0);
    CHECK(p0.x == 1.0);
    CHECK(p0.y == 0.0);
    CHECK(p0.z == 0.0);
    CHECK_THROWS_AS(rindler_trajectory(1.0, 0.0), std::domain_error);

    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> tau(-3.0, 3.0), acc(0.05, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const SpacetimePoint p = rindler_trajectory(tau(rng), acc(rng));
        const double residual = p.x * p.x - p.ct * p.ct - 1.0;
        CHECK(std::abs(residual) <= 1e-10 * p.x * p.x);
    }
}

TEST_CASE("laboratory time of one quasi-cycle") {
    // sinh(8 pi)/4 in units of 1/omega0; 5.139 s at omega0 = 2e9 rad/s
    const double lab = lab_time(2.0 * kPi, 4.0);
    CHECK(lab == Approx(41113157792.79749763748 / 4.0).epsilon(1e-13));
    CHECK(lab / 2.0e9 == Approx(5.139144724).epsilon(1e-9));
    CHECK(lab_time(1.5, 0.0) == 1.5);
}

TEST_CASE("correlation function is Hermitian under lag reflection") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lag(-5.0, 5.0), acc(0.2, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double t = lag(rng), a = acc(rng);
        const std::complex<double> fwd = correlation_function(t, a, 1e-3);
        const std::complex<double> rev = correlation_function(-t, a, 1e-3);
        CHECK(std::abs(std::conj(rev) - fwd) <= 1e-12 * std::abs(fwd));
    }
    CHECK_THROWS_AS(correlation_function(1.0, 0.0, 1e-3), std::domain_error);
    CHECK_THROWS_AS(correlation_function(1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("correlation function approaches the inertial form at small abar") {
    // sinh(z) = z(1 + z^2/6 + ...): the relative deviation is (2/3)(abar*t/2)^2
    const double eps = 1e-4;
    for (double t : {0.3, 1.0, 2.5}) {
        const std::complex<double> z(t, -eps);
        const std::complex<double> inertial = 3.0 / kPi / (z * z * z * z);
        const std::complex<double> val = correlation_function(t, 1e-4, eps);
        CHECK(std::abs(val - inertial) <= 3e-8 * std::abs(inertial));
    }
}

TEST_CASE("windowed Fourier transform reproduces the spectral density") {
    // regulator eps = 1e-3 biases the transform by exactly e^{-eps}
    const double ft = spectral_density_from_correlation(1.0, 2.0, 1e-3, 20.0);
    const double ref = spectral_density(1.0, 2.0);
    CHECK(std::abs(ft - ref) / ref < 1e-2);
    CHECK(ft == Approx(ref * std::exp(-1e-3)).epsilon(1e-5));
}
