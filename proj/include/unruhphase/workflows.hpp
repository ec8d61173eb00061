// workflows.hpp — the evolve / phase / diff / sweep / check commands behind
// the CLI, factored out so they can be exercised directly.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "unruhphase/config.hpp"
#include "unruhphase/csv.hpp"
#include "unruhphase/dynamics.hpp"
#include "unruhphase/phase.hpp"

namespace unruhphase {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCheckFailed = 3;

// ---------------------------------------------------------------- evolve ----

// Samples the closed-form evolution (optionally alongside the RK4 oracle) and
// writes the trajectory CSV.
inline int run_evolve(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.out.empty()) throw validation_error("evolve: --out is required");
    const AtomBathParams p = cfg.atom_params();
    const KossakowskiCoeffs k = kossakowski(p, cfg.omega_shift);
    const double tau_end = cfg.periods * 2.0 * std::numbers::pi / k.Omega;
    const std::size_t steps = static_cast<std::size_t>(cfg.steps);

    const Trajectory exact = sample_closed_form(p.theta, k, tau_end, steps);
    Trajectory rk4;
    double max_dev = 0.0;
    if (cfg.oracle) {
        rk4 = integrate_lindblad(p.theta, k, tau_end, steps);
        for (std::size_t i = 0; i < exact.samples.size(); ++i) {
            const auto& a = exact.samples[i].state;
            const auto& b = rk4.samples[i].state;
            max_dev = std::max({max_dev, std::abs(a.rho_ee - b.rho_ee),
                                std::abs(a.coh.real() - b.coh.real()),
                                std::abs(a.coh.imag() - b.coh.imag())});
        }
    }

    AtomicFile file(cfg.out);
    auto& out = file.stream();
    out << "# reduced two-level state evolution (natural units: tau_bar = omega0*tau)\n";
    out << "# convention: coh = <e|rho|g>, r1 = 2 Re coh, r2 = -2 Im coh, r3 = 2 rho_ee - 1\n";
    out << "tau_bar,rho_ee,re_coh,im_coh,r1,r2,r3";
    if (cfg.oracle) out << ",rk4_rho_ee,rk4_re_coh,rk4_im_coh";
    out << "\n";
    for (std::size_t i = 0; i < exact.samples.size(); ++i) {
        const auto& s = exact.samples[i];
        const BlochVector b = to_bloch(s.state);
        out << format_g17(s.tau_bar) << ',' << format_g17(s.state.rho_ee) << ','
            << format_g17(s.state.coh.real()) << ',' << format_g17(s.state.coh.imag()) << ','
            << format_g17(b.r1) << ',' << format_g17(b.r2) << ',' << format_g17(b.r3);
        if (cfg.oracle) {
            const auto& r = rk4.samples[i].state;
            out << ',' << format_g17(r.rho_ee) << ',' << format_g17(r.coh.real()) << ','
                << format_g17(r.coh.imag());
        }
        out << "\n";
    }
    if (cfg.oracle) out << "# rk4_max_abs_deviation = " << format_g17(max_dev) << "\n";
    file.commit();

    log << "wrote " << exact.samples.size() << " rows to " << cfg.out << "\n";
    if (cfg.oracle) log << "rk4 max deviation from closed form: " << format_g17(max_dev) << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- phase ----

// Computes the phase by the requested method(s) and prints a small report
// with the unitary reference value.
inline int run_phase(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const AtomBathParams p = cfg.atom_params();
    if (p.gamma_ratio > 1e-2)
        out << "warning: gamma_ratio = " << format_g17(p.gamma_ratio)
            << " is outside the weak-coupling regime; first_order is unreliable\n";
    out << "theta = " << format_g17(p.theta) << ", abar = " << format_g17(p.abar)
        << ", gamma_ratio = " << format_g17(p.gamma_ratio) << ", periods = " << cfg.periods
        << "\n";

    const bool all = cfg.method == "all";
    auto emit = [&](const PhaseResult& r, const std::string& note) {
        out << "  " << to_string(r.method) << (r.fallback ? " (fell back to quadrature)" : "")
            << ": gamma = " << format_g17(r.gamma) << " rad";
        if (!note.empty()) out << "  [" << note << "]";
        out << "\n";
    };
    if (all || cfg.method == "quadrature")
        emit(phase_quadrature(p, cfg.periods, cfg.omega_shift), "abs tol 1e-12");
    if (all || cfg.method == "closed_form")
        emit(phase_closed_form(p, cfg.periods, cfg.omega_shift), "matches quadrature to 1e-9");
    if (all || cfg.method == "first_order") {
        if (cfg.periods != 1 && !all)
            throw validation_error("phase: first_order is a single-period expansion");
        if (cfg.periods == 1)
            emit(phase_first_order(p), "first order in gamma_ratio");
    }
    if (all || cfg.method == "kinematic") {
        const KossakowskiCoeffs k = kossakowski(p, cfg.omega_shift);
        const double tau_end = cfg.periods * 2.0 * std::numbers::pi / k.Omega;
        const std::size_t steps = static_cast<std::size_t>(
            std::max<long>(cfg.steps, 200L * cfg.periods));
        const Trajectory traj = integrate_lindblad(p.theta, k, tau_end, steps);
        emit(phase_kinematic(traj), std::to_string(steps) + " samples, O(step^2) discretization");
    }
    out << "  unitary reference -pi(1-cos theta) per period: "
        << format_g17(-std::numbers::pi * (1.0 - std::cos(p.theta)) * cfg.periods) << " rad\n";
    return kExitOk;
}

// ------------------------------------------------------------------ diff ----

// Accelerated-minus-inertial phase difference plus the laboratory-frame
// duration of the quasi-cycle.
inline int run_diff(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const AtomBathParams p = cfg.atom_params();
    const PhaseDifference d = phase_difference(p);
    out << "theta = " << format_g17(p.theta) << ", abar = " << format_g17(p.abar)
        << ", gamma_ratio = " << format_g17(p.gamma_ratio) << "\n";
    out << "  gamma_accelerated (quadrature) = " << format_g17(d.gamma_accelerated) << " rad\n";
    out << "  gamma_inertial    (quadrature) = " << format_g17(d.gamma_inertial) << " rad\n";
    out << "  delta_a exact       = " << format_g17(d.exact) << " rad (|delta| = "
        << format_g17(std::abs(d.exact)) << ")\n";
    out << "  delta_a first order = " << format_g17(d.first_order) << " rad (|delta| = "
        << format_g17(std::abs(d.first_order)) << ")\n";

    const double cycle = 2.0 * std::numbers::pi;  // proper time, units of 1/omega0
    if (p.abar > 0.0) {
        const double lab = lab_time(cycle, p.abar);
        out << "  lab-frame duration of one quasi-cycle: " << format_g17(lab)
            << " / omega0";
        if (cfg.omega0) out << " = " << format_g17(lab / *cfg.omega0) << " s";
        out << "\n";
    } else {
        out << "  inertial atom: lab-frame duration equals proper duration\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- sweep ----

struct SweepRow {
    double theta{0.0};
    double abar{0.0};
    double gamma_quadrature{0.0};
    double gamma_first_order{0.0};
    double delta_a_exact{0.0};
    double delta_a_first_order{0.0};
};

// Evaluates the grid with a worker pool; rows land in deterministic
// (theta outer, abar inner) order regardless of scheduling.
inline std::vector<SweepRow> sweep_grid(const std::vector<double>& thetas,
                                        const std::vector<double>& abars, double gamma_ratio) {
    std::vector<SweepRow> rows(thetas.size() * abars.size());
    std::atomic<std::size_t> next{0};
    const std::size_t total = rows.size();
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            const double theta = thetas[i / abars.size()];
            const double abar = abars[i % abars.size()];
            const AtomBathParams p{gamma_ratio, abar, theta};
            const PhaseDifference d = phase_difference(p);
            rows[i] = {theta,    abar,          d.gamma_accelerated,
                       phase_first_order(p).gamma, d.exact, d.first_order};
        }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), total);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

inline int run_sweep(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    if (cfg.out.empty()) throw validation_error("sweep: --out is required");
    if (!cfg.theta_grid && !cfg.abar_grid)
        throw validation_error("sweep: give --theta-grid and/or --abar-grid (min:max:count)");

    const std::vector<double> thetas =
        cfg.theta_grid ? cfg.theta_grid->points() : std::vector<double>{cfg.theta};
    const std::vector<double> abars =
        cfg.abar_grid ? cfg.abar_grid->points() : std::vector<double>{cfg.resolved_abar()};
    const auto rows = sweep_grid(thetas, abars, cfg.gamma_ratio);

    AtomicFile file(cfg.out);
    auto& out = file.stream();
    out << "theta,abar,gamma_quadrature,gamma_first_order,delta_a_exact,delta_a_first_order\n";
    for (const auto& r : rows)
        out << format_g17(r.theta) << ',' << format_g17(r.abar) << ','
            << format_g17(r.gamma_quadrature) << ',' << format_g17(r.gamma_first_order) << ','
            << format_g17(r.delta_a_exact) << ',' << format_g17(r.delta_a_first_order) << "\n";
    file.commit();
    log << "wrote " << rows.size() << " rows to " << cfg.out << "\n";

    if (!cfg.plot_script.empty()) {
        AtomicFile script(cfg.plot_script);
        auto& s = script.stream();
        s << "# gnuplot script: phase difference magnitude across the sweep\n"
          << "set datafile separator ','\n"
          << "set key top right\n"
          << "set logscale y\n"
          << "set xlabel 'theta [rad]'\n"
          << "set ylabel '|delta_a| [rad]'\n"
          << "plot '" << cfg.out << "' every ::1 using 1:(abs($5)) with linespoints title 'exact', \\\n"
          << "     '" << cfg.out << "' every ::1 using 1:(abs($6)) with lines title 'first order'\n"
          << "pause -1\n"
          << "set xlabel 'abar'\n"
          << "plot '" << cfg.out << "' every ::1 using 2:(abs($5)) with linespoints title 'exact', \\\n"
          << "     '" << cfg.out << "' every ::1 using 2:(abs($6)) with lines title 'first order'\n"
          << "pause -1\n";
        script.commit();
        log << "wrote plot script to " << cfg.plot_script << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- check ----

struct CheckItem {
    std::string name;
    bool passed{false};
    double worst{0.0};
    double tolerance{0.0};
    std::string detail;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_passed() const {
        return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
    }
};

namespace detail {

inline const std::vector<double>& check_thetas() {
    static const std::vector<double> v{0.2, 0.8, 0.5 * std::numbers::pi, 2.2, 2.9};
    return v;
}
inline const std::vector<double>& check_abars() {
    static const std::vector<double> v{0.0, 0.5, 1.0, 4.0, 10.0};
    return v;
}

}  // namespace detail

// Runs the cross-check suite: detailed balance, the two spectral-density
// routes, closed form vs RK4, the three phase methods against each other, the
// expansion against its second-order envelope, and the numeric Fourier
// transform of the correlation function. `perturb` adds an offset (units of
// omega0) to the decay coefficient used by the closed form, to demonstrate
// the RK4 comparison actually bites.
inline CheckReport run_check(bool quick, double perturb, std::ostream& out) {
    CheckReport report;
    const double g = 1e-6;
    const auto& thetas = detail::check_thetas();
    const std::vector<double> theta_sub{0.8, 0.5 * std::numbers::pi};
    const std::vector<double> abar_sub{0.0, 4.0};
    const auto& th_grid = quick ? theta_sub : thetas;
    const auto& ab_grid = quick ? abar_sub : detail::check_abars();

    auto add = [&](const std::string& name, double worst, double tol, const std::string& detail_str) {
        report.items.push_back({name, worst <= tol, worst, tol, detail_str});
        const auto& item = report.items.back();
        out << (item.passed ? "PASS " : "FAIL ") << item.name << ": worst = " << format_g17(worst)
            << ", tol = " << format_g17(tol);
        if (!detail_str.empty()) out << "  (" << detail_str << ")";
        out << "\n";
    };

    {  // detailed balance of the spectral density
        double worst = 0.0;
        for (double l : {0.1, 0.5, 1.0, 2.0, 10.0})
            for (double a : {0.5, 1.0, 4.0, 10.0})
                worst = std::max(worst, std::abs(unruh_kms_ratio(l, a) -
                                                 std::exp(-2.0 * std::numbers::pi * l / a)));
        add("kms-detailed-balance", worst, 1e-12, "5x4 (lambda, abar) grid");
    }
    {  // quarter sum/difference route vs closed-form coefficients
        double worst = 0.0;
        for (double a : {0.5, 1.0, 4.0, 10.0}) {
            const KossakowskiCoeffs k = kossakowski({g, a, 0.0});
            const double As = 0.25 * g * (spectral_density(1, a) + spectral_density(-1, a));
            const double Bs = 0.25 * g * (spectral_density(1, a) - spectral_density(-1, a));
            worst = std::max({worst, std::abs(As - k.A) / k.A, std::abs(Bs - k.B) / k.B});
        }
        add("kossakowski-cross-check", worst, 1e-12, "relative, abar in {0.5,1,4,10}");
    }
    {  // closed form vs RK4 endpoint, optionally with the injected fault
        double worst = 0.0;
        const std::size_t steps = quick ? 2000 : 10000;
        for (double th : th_grid)
            for (double a : ab_grid) {
                const KossakowskiCoeffs k = kossakowski({g, a, th});
                KossakowskiCoeffs kp = k;
                if (perturb != 0.0 && !kp.unitary) {
                    kp.A += perturb;
                    kp.C = -kp.A;
                    kp.R = kp.B / kp.A;
                }
                const double tau = 2.0 * std::numbers::pi;
                const Trajectory traj = integrate_lindblad(th, k, tau, steps);
                const DensityMatrix ref = rho_closed_form(tau, th, kp);
                const auto& end = traj.samples.back().state;
                worst = std::max({worst, std::abs(end.rho_ee - ref.rho_ee),
                                  std::abs(end.coh.real() - ref.coh.real()),
                                  std::abs(end.coh.imag() - ref.coh.imag())});
            }
        add("closed-form-vs-rk4", worst, 1e-10,
            std::to_string(steps) + " steps" + (perturb != 0.0 ? ", perturbed" : ""));
    }
    {  // quadrature vs closed form
        double worst = 0.0;
        for (double th : th_grid)
            for (double a : ab_grid) {
                const AtomBathParams p{g, a, th};
                worst = std::max(worst, std::abs(phase_quadrature(p, 1).gamma -
                                                 phase_closed_form(p, 1).gamma));
            }
        add("quadrature-vs-closed-form", worst, 1e-9, "");
    }
    {  // kinematic vs quadrature
        double worst = 0.0;
        const std::size_t samples = quick ? 20000 : 100000;
        for (double th : th_grid)
            for (double a : ab_grid) {
                const AtomBathParams p{g, a, th};
                const KossakowskiCoeffs k = kossakowski(p);
                const Trajectory traj =
                    integrate_lindblad(th, k, 2.0 * std::numbers::pi, samples);
                worst = std::max(worst,
                                 std::abs(phase_kinematic(traj).gamma - phase_quadrature(p, 1).gamma));
            }
        add("kinematic-vs-quadrature", worst, 1e-6, std::to_string(samples) + " samples");
    }
    {  // expansion against the exact value, within its second-order envelope
        double worst_excess = 0.0;
        double worst_ratio = 0.0;
        for (double th : th_grid)
            for (double a : ab_grid) {
                const AtomBathParams p{g, a, th};
                const double diff =
                    std::abs(phase_first_order(p).gamma - phase_quadrature(p, 1).gamma);
                const KossakowskiCoeffs k = kossakowski(p);
                const double cube = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;
                const double envelope = 1e-9 + 0.5 * (4.0 * k.A) * (4.0 * k.A) * cube / 3.0;
                worst_excess = std::max(worst_excess, diff - envelope);
                worst_ratio = std::max(worst_ratio, diff / envelope);
            }
        add("first-order-vs-quadrature", worst_ratio, 1.0,
            "ratio to the O(gamma_ratio^2) envelope 1e-9 + 0.5(4A)^2(2pi)^3/3");
    }
    if (!quick) {  // numeric Fourier transform of the correlation function
        const double ft = spectral_density_from_correlation(1.0, 2.0, 1e-3, 20.0);
        const double ref = spectral_density(1.0, 2.0);
        add("correlation-ft-vs-spectral-density", std::abs(ft - ref) / ref, 1e-2,
            "lambda=1, abar=2, eps=1e-3, window=20");
    }

    out << (report.all_passed() ? "check: all passed\n" : "check: FAILURES present\n");
    return report;
}

inline int run_check_cmd(const RunConfig& cfg, std::ostream& out) {
    return run_check(cfg.quick, cfg.perturb, out).all_passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace unruhphase
