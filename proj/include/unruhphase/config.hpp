// config.hpp — run configuration: flat key=value files with # comments,
// flag overrides, validation that reports every violated field, and SI
// conversion of the acceleration.

#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "unruhphase/bath.hpp"
#include "unruhphase/csv.hpp"

namespace unruhphase {

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Uniform grid over one sweep axis, parsed from "min:max:count".
struct GridSpec {
    double min{0.0};
    double max{0.0};
    int count{1};

    std::vector<double> points() const {
        std::vector<double> v;
        v.reserve(count);
        for (int i = 0; i < count; ++i)
            v.push_back(count == 1 ? min
                                   : min + (max - min) * static_cast<double>(i) / (count - 1));
        return v;
    }
};

struct RunConfig {
    double gamma_ratio{1e-6};
    std::optional<double> abar;    // dimensionless acceleration, or ...
    std::optional<double> omega0;  // rad/s   } SI pair: abar = accel/(c*omega0)
    std::optional<double> accel;   // m/s^2   }
    double theta{0.5 * std::numbers::pi};
    int periods{1};
    long steps{1000};
    std::string method{"all"};  // quadrature | closed_form | first_order | kinematic | all
    std::string out;
    bool oracle{false};
    bool quick{false};
    double perturb{0.0};
    double omega_shift{0.0};
    std::optional<GridSpec> theta_grid;
    std::optional<GridSpec> abar_grid;
    std::string plot_script;

    // Dimensionless acceleration from whichever input was given.
    double resolved_abar() const {
        if (abar) return *abar;
        return *accel / (kSpeedOfLight * *omega0);
    }

    AtomBathParams atom_params() const { return {gamma_ratio, resolved_abar(), theta}; }

    // Collects every violated field into one error.
    void validate() const {
        std::vector<std::string> bad;
        if (!(gamma_ratio >= 0.0) || !std::isfinite(gamma_ratio))
            bad.push_back("gamma_ratio: must be >= 0");
        if (abar && (!(*abar >= 0.0) || !std::isfinite(*abar)))
            bad.push_back("abar: must be >= 0");
        if (omega0 && !(*omega0 > 0.0)) bad.push_back("omega0: must be > 0");
        if (accel && !(*accel >= 0.0)) bad.push_back("accel: must be >= 0");
        if (abar && accel)
            bad.push_back("abar/accel: give the acceleration either directly or in SI, not both");
        if (accel && !omega0) bad.push_back("accel: requires omega0 for the SI conversion");
        if (!abar && !(omega0 && accel))
            bad.push_back("abar: required (directly, or via omega0 + accel)");
        if (!(theta >= 0.0 && theta <= std::numbers::pi))
            bad.push_back("theta: must lie in [0, pi]");
        if (periods < 1) bad.push_back("periods: must be >= 1");
        if (steps < 1) bad.push_back("steps: must be >= 1");
        if (oracle && steps < 100) bad.push_back("steps: the RK4 oracle needs >= 100");
        if (method != "quadrature" && method != "closed_form" && method != "first_order" &&
            method != "kinematic" && method != "all")
            bad.push_back("method: one of quadrature|closed_form|first_order|kinematic|all");
        if (theta_grid && !(theta_grid->count >= 1 && theta_grid->min >= 0.0 &&
                            theta_grid->max <= std::numbers::pi && theta_grid->min <= theta_grid->max))
            bad.push_back("theta_grid: need 0 <= min <= max <= pi and count >= 1");
        if (abar_grid && !(abar_grid->count >= 1 && abar_grid->min >= 0.0 &&
                           abar_grid->min <= abar_grid->max))
            bad.push_back("abar_grid: need 0 <= min <= max and count >= 1");
        if (!bad.empty()) {
            std::string msg = "invalid configuration:";
            for (const auto& b : bad) msg += "\n  - " + b;
            throw validation_error(msg);
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw validation_error("config key '" + key + "': cannot parse number '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw validation_error("config key '" + key + "': cannot parse integer '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw validation_error("config key '" + key + "': cannot parse boolean '" + v + "'");
}

}  // namespace detail

inline GridSpec parse_grid(const std::string& key, const std::string& v) {
    std::istringstream in(v);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(detail::trim(part));
    if (parts.size() != 3)
        throw validation_error("config key '" + key + "': expected min:max:count, got '" + v + "'");
    GridSpec g;
    g.min = detail::parse_double(key, parts[0]);
    g.max = detail::parse_double(key, parts[1]);
    g.count = static_cast<int>(detail::parse_long(key, parts[2]));
    return g;
}

// Applies key=value lines from `path` onto `cfg`. Unknown keys are errors.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config file " + path + ":" + std::to_string(lineno) +
                                   ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));

        if (key == "gamma_ratio") cfg.gamma_ratio = detail::parse_double(key, val);
        else if (key == "abar") cfg.abar = detail::parse_double(key, val);
        else if (key == "omega0") cfg.omega0 = detail::parse_double(key, val);
        else if (key == "accel") cfg.accel = detail::parse_double(key, val);
        else if (key == "theta") cfg.theta = detail::parse_double(key, val);
        else if (key == "periods") cfg.periods = static_cast<int>(detail::parse_long(key, val));
        else if (key == "steps") cfg.steps = detail::parse_long(key, val);
        else if (key == "method") cfg.method = val;
        else if (key == "out") cfg.out = val;
        else if (key == "oracle") cfg.oracle = detail::parse_bool(key, val);
        else if (key == "quick") cfg.quick = detail::parse_bool(key, val);
        else if (key == "perturb") cfg.perturb = detail::parse_double(key, val);
        else if (key == "omega_shift") cfg.omega_shift = detail::parse_double(key, val);
        else if (key == "theta_grid") cfg.theta_grid = parse_grid(key, val);
        else if (key == "abar_grid") cfg.abar_grid = parse_grid(key, val);
        else if (key == "plot_script") cfg.plot_script = val;
        else
            throw validation_error("config file " + path + ":" + std::to_string(lineno) +
                                   ": unknown key '" + key + "'");
    }
}

}  // namespace unruhphase
