// unruhphase_main.cpp — command-line front end: evolve | phase | diff | sweep | check.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "unruhphase/workflows.hpp"

namespace {

using unruhphase::RunConfig;

struct FlagValues {
    std::string config;
    std::optional<double> theta, abar, omega0, accel, gamma_ratio;
    std::optional<int> periods;
    std::optional<long> steps;
    std::optional<std::string> method, out, theta_grid, abar_grid, plot_script;
    bool oracle{false};
    bool quick{false};
    std::optional<double> perturb, omega_shift;
};

// Registers the shared flags on a subcommand; file values are applied first,
// then any flag given on the command line overrides them.
void add_common_flags(CLI::App* cmd, FlagValues& f) {
    cmd->add_option("--config", f.config, "key=value config file (# comments)");
    cmd->add_option("--theta", f.theta, "initial Bloch polar angle [rad]");
    cmd->add_option("--abar", f.abar, "dimensionless acceleration a/(c*omega0)");
    cmd->add_option("--omega0", f.omega0, "transition frequency [rad/s] (SI input)");
    cmd->add_option("--accel", f.accel, "proper acceleration [m/s^2] (SI input, needs --omega0)");
    cmd->add_option("--gamma-ratio", f.gamma_ratio, "gamma0/omega0 (0 = unitary)");
    cmd->add_option("--periods", f.periods, "number of quasi-cycles");
    cmd->add_option("--steps", f.steps, "samples per run (RK4 steps / CSV rows)");
    cmd->add_option("--method", f.method,
                    "quadrature|closed_form|first_order|kinematic|all");
    cmd->add_flag("--oracle", f.oracle, "also run the RK4 oracle and report the deviation");
    cmd->add_option("--out", f.out, "output file path");
    cmd->add_flag("--quick", f.quick, "reduced check suite (< 10 s)");
    cmd->add_option("--perturb", f.perturb,
                    "check only: offset added to the closed-form A coefficient [omega0]");
    cmd->add_option("--omega-shift", f.omega_shift, "level-spacing shift dOmega/omega0");
    cmd->add_option("--theta-grid", f.theta_grid, "sweep grid min:max:count over theta");
    cmd->add_option("--abar-grid", f.abar_grid, "sweep grid min:max:count over abar");
    cmd->add_option("--plot-script", f.plot_script, "sweep: also emit a gnuplot script here");
}

RunConfig build_config(const FlagValues& f) {
    RunConfig cfg;
    if (!f.config.empty()) unruhphase::apply_config_file(cfg, f.config);
    if (f.theta) cfg.theta = *f.theta;
    if (f.abar) cfg.abar = *f.abar;
    if (f.omega0) cfg.omega0 = *f.omega0;
    if (f.accel) cfg.accel = *f.accel;
    if (f.gamma_ratio) cfg.gamma_ratio = *f.gamma_ratio;
    if (f.periods) cfg.periods = *f.periods;
    if (f.steps) cfg.steps = *f.steps;
    if (f.method) cfg.method = *f.method;
    if (f.out) cfg.out = *f.out;
    if (f.oracle) cfg.oracle = true;
    if (f.quick) cfg.quick = true;
    if (f.perturb) cfg.perturb = *f.perturb;
    if (f.omega_shift) cfg.omega_shift = *f.omega_shift;
    if (f.theta_grid) cfg.theta_grid = unruhphase::parse_grid("theta_grid", *f.theta_grid);
    if (f.abar_grid) cfg.abar_grid = unruhphase::parse_grid("abar_grid", *f.abar_grid);
    if (f.plot_script) cfg.plot_script = *f.plot_script;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geometric phase of a uniformly accelerated two-level atom"};
    app.require_subcommand(1);

    FlagValues f;
    CLI::App* evolve = app.add_subcommand("evolve", "sample the state evolution to CSV");
    CLI::App* phase = app.add_subcommand("phase", "compute the geometric phase");
    CLI::App* diff = app.add_subcommand("diff", "accelerated-minus-inertial phase difference");
    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a (theta, abar) grid to CSV");
    CLI::App* check = app.add_subcommand("check", "run the cross-check suite");
    for (CLI::App* cmd : {evolve, phase, diff, sweep, check}) add_common_flags(cmd, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? unruhphase::kExitOk : unruhphase::kExitValidation;
    }

    try {
        const RunConfig cfg = build_config(f);
        if (evolve->parsed()) return unruhphase::run_evolve(cfg, std::cout);
        if (phase->parsed()) return unruhphase::run_phase(cfg, std::cout);
        if (diff->parsed()) return unruhphase::run_diff(cfg, std::cout);
        if (sweep->parsed()) return unruhphase::run_sweep(cfg, std::cout);
        if (check->parsed()) return unruhphase::run_check_cmd(cfg, std::cout);
    } catch (const unruhphase::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return unruhphase::kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return unruhphase::kExitValidation;
    }
    return unruhphase::kExitValidation;
}
