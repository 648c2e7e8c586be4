#pragma once

// Experiment configuration: one `key = value` pair per line, `#` comments.
// Physical parameters may be given directly (r, lambdas) or in the
// dimensionless form (r_gamma, lambda_over_gamma).

#include <streetperc/error.hpp>
#include <streetperc/estimators.hpp>
#include <streetperc/tessellation.hpp>

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace streetperc::cli {

enum class Experiment { Threshold, CrossingCurves, Theta, Stretch, Table1 };

inline std::string to_string(Experiment e) {
    switch (e) {
    case Experiment::Threshold: return "threshold";
    case Experiment::CrossingCurves: return "crossing-curves";
    case Experiment::Theta: return "theta";
    case Experiment::Stretch: return "stretch";
    case Experiment::Table1: return "table1";
    }
    return "?";
}

inline Experiment parse_experiment(const std::string& s) {
    for (Experiment e : {Experiment::Threshold, Experiment::CrossingCurves, Experiment::Theta, Experiment::Stretch,
                         Experiment::Table1})
        if (to_string(e) == s) return e;
    throw InvalidParameter("experiment: unknown value '" + s + "'");
}

/// Raised for configuration problems; the message starts with the field name.
class ConfigError : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Threshold;
    TessellationKind kind = TessellationKind::PVT;
    double gamma = 20.0;
    std::optional<double> r;
    std::optional<double> r_gamma;
    std::vector<double> lambdas;             // per km; empty = automatic grid (threshold experiments)
    std::optional<double> window;            // km; default depends on the experiment
    std::vector<double> windows{5, 10, 15};  // crossing-curves
    std::vector<double> r_gamma_list{0.3, 0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5, 9.5}; // table1
    std::optional<int> runs; // default 50, or 100 for the stretch factor
    int n = 10;
    int M = 30;
    std::uint64_t seed = 1;
    std::string out = "results";
    std::optional<std::uint64_t> budget;
    double min_dist = 4.0;
    int grid_points = 10;
    double p_crit = kCriticalCrossingProbability;
    FitMethod fit = FitMethod::LeastSquares;
    bool plots = true;
    std::optional<std::string> samples; // theta: replay from this samples file

    /// Connection radius in km.
    double radius() const { return r ? *r : *r_gamma / gamma; }
    double radius_for(double rg) const { return rg / gamma; }

    /// Window side: explicit, or the defaults of the published experiments
    /// (30 km for thresholds, 10 km for r*gamma <= 0.5, 15 km for
    /// r*gamma = 1.5, 5 km for the stretch factor).
    double window_for(double rg) const {
        if (window) return *window;
        if (experiment == Experiment::Stretch) return 5.0;
        if (rg <= 0.5 + 1e-12) return 10.0;
        if (rg <= 1.5 + 1e-12) return 15.0;
        return 30.0;
    }
    int run_count() const { return runs ? *runs : (experiment == Experiment::Stretch ? 100 : 50); }
    double window_side() const { return window_for(radius() * gamma); }

    std::uint64_t budget_for(double lambda_ref, double side) const {
        return budget ? *budget : default_budget(lambda_ref, gamma * side * side);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::logic_error&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long d = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::logic_error&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": list must not be empty");
    return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

} // namespace detail

/// Parses `key = value` text. Unknown keys are errors.
inline ExperimentConfig parse_config(const std::string& text, std::optional<Experiment> subcommand = std::nullopt) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        if (kv.count(key)) throw ConfigError(key + ": given more than once");
        kv[key] = detail::trim(line.substr(eq + 1));
    }

    ExperimentConfig c;
    std::optional<std::vector<double>> lambda_over_gamma;
    for (const auto& [key, v] : kv) {
        if (key == "experiment") c.experiment = parse_experiment(v);
        else if (key == "kind") {
            try {
                c.kind = parse_kind(v);
            } catch (const InvalidParameter&) {
                throw ConfigError("kind: expected PVT or PDT, got '" + v + "'");
            }
        } else if (key == "gamma") c.gamma = detail::to_double(key, v);
        else if (key == "r") c.r = detail::to_double(key, v);
        else if (key == "r_gamma") c.r_gamma = detail::to_double(key, v);
        else if (key == "lambdas") c.lambdas = detail::to_list(key, v);
        else if (key == "lambda_over_gamma") lambda_over_gamma = detail::to_list(key, v);
        else if (key == "window") c.window = detail::to_double(key, v);
        else if (key == "windows") c.windows = detail::to_list(key, v);
        else if (key == "r_gamma_list") c.r_gamma_list = detail::to_list(key, v);
        else if (key == "runs") c.runs = static_cast<int>(detail::to_int(key, v));
        else if (key == "n") c.n = static_cast<int>(detail::to_int(key, v));
        else if (key == "M") c.M = static_cast<int>(detail::to_int(key, v));
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::to_int(key, v));
        else if (key == "out") c.out = v;
        else if (key == "budget") c.budget = static_cast<std::uint64_t>(detail::to_int(key, v));
        else if (key == "min_dist") c.min_dist = detail::to_double(key, v);
        else if (key == "grid_points") c.grid_points = static_cast<int>(detail::to_int(key, v));
        else if (key == "p_crit") c.p_crit = detail::to_double(key, v);
        else if (key == "fit") {
            if (v == "ols") c.fit = FitMethod::LeastSquares;
            else if (v == "mle") c.fit = FitMethod::MaximumLikelihood;
            else throw ConfigError("fit: expected ols or mle, got '" + v + "'");
        } else if (key == "plots") c.plots = detail::to_bool(key, v);
        else if (key == "samples") c.samples = v;
        else throw ConfigError(key + ": unknown configuration key");
    }
    if (subcommand) {
        if (kv.count("experiment") && c.experiment != *subcommand)
            throw ConfigError("experiment: config says '" + to_string(c.experiment) + "' but subcommand is '" +
                              to_string(*subcommand) + "'");
        c.experiment = *subcommand;
    }

    if (!(c.gamma > 0.0)) throw ConfigError("gamma: must be positive");
    if (c.experiment != Experiment::Table1) {
        if (c.r.has_value() == c.r_gamma.has_value()) throw ConfigError("r: give exactly one of r or r_gamma");
        if (!(c.radius() > 0.0)) throw ConfigError(c.r ? "r: must be positive" : "r_gamma: must be positive");
    }
    if (lambda_over_gamma) {
        if (!c.lambdas.empty()) throw ConfigError("lambdas: give either lambdas or lambda_over_gamma, not both");
        for (double x : *lambda_over_gamma) c.lambdas.push_back(x * c.gamma);
    }
    for (double l : c.lambdas)
        if (!(l >= 0.0)) throw ConfigError("lambdas: values must be >= 0");
    if ((c.experiment == Experiment::Theta || c.experiment == Experiment::Stretch) && c.lambdas.empty())
        throw ConfigError("lambdas: required for the " + to_string(c.experiment) + " experiment");
    if (c.window && !(*c.window > 0.0)) throw ConfigError("window: must be positive");
    for (double w : c.windows)
        if (!(w > 0.0)) throw ConfigError("windows: values must be positive");
    for (double rg : c.r_gamma_list)
        if (!(rg > 0.0)) throw ConfigError("r_gamma_list: values must be positive");
    if (c.runs && *c.runs < 1) throw ConfigError("runs: must be >= 1");
    if (c.n < 1) throw ConfigError("n: must be >= 1");
    if (c.M < 1) throw ConfigError("M: must be >= 1");
    if (c.grid_points < 2) throw ConfigError("grid_points: must be >= 2");
    if (!(c.p_crit > 0.0 && c.p_crit < 1.0)) throw ConfigError("p_crit: must lie in (0, 1)");
    if (!(c.min_dist >= 0.0)) throw ConfigError("min_dist: must be >= 0");
    return c;
}

inline ExperimentConfig load_config(const std::string& path, std::optional<Experiment> subcommand = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), subcommand);
}

} // namespace streetperc::cli
