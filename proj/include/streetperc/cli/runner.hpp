#pragma once

// Experiment runner behind the command-line tool. Every simulation record is
// persisted next to a key file describing the parameters that produced it;
// a later invocation with the same key reuses the stored records and only
// simulates what is missing. Plots are always rendered from the CSV files.

#include <streetperc/cli/config.hpp>
#include <streetperc/cli/svg.hpp>
#include <streetperc/experiments.hpp>
#include <streetperc/io.hpp>
#include <streetperc/version.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace streetperc::cli {

namespace fs = std::filesystem;

struct RunReport {
    std::size_t simulated = 0; // simulation runs executed by this invocation
    std::size_t reused = 0;    // runs loaded from persisted records
    std::vector<std::string> files;
};

/// Column-addressable view of a CSV file.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw Error("CSV column '" + name + "' not found");
    }
    double number(std::size_t row, const std::string& name) const {
        const std::string& v = rows[row][column(name)];
        return v == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(v);
    }
};

inline CsvTable read_csv(const fs::path& path) {
    auto in = io::open_input(path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV '" + path.string() + "'");
    t.header = io::detail::split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(io::detail::split(line));
    return t;
}

inline std::string num_or_nan(double v) { return std::isfinite(v) ? io::num(v) : "nan"; }

inline std::string window_tag(double w) { return io::short_num(w); }

inline nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["experiment"] = to_string(c.experiment);
    if (c.experiment != Experiment::Table1) {
        j["kind"] = std::string(to_string(c.kind));
        j["r_km"] = c.radius();
        j["r_gamma"] = c.radius() * c.gamma;
    }
    j["gamma_per_km"] = c.gamma;
    j["lambdas_per_km"] = c.lambdas;
    switch (c.experiment) {
    case Experiment::Threshold:
    case Experiment::Stretch:
    case Experiment::Theta: j["window_km"] = c.window_side(); break;
    case Experiment::CrossingCurves: j["windows_km"] = c.windows; break;
    case Experiment::Table1:
        j["r_gamma_list"] = c.r_gamma_list;
        if (c.window) j["window_km"] = *c.window;
        break;
    }
    auto band = [&](TessellationKind kind, double side) { return default_band(seed_intensity_for_gamma(c.gamma, kind), side); };
    switch (c.experiment) {
    case Experiment::Threshold:
    case Experiment::Stretch:
    case Experiment::Theta: j["band_km"] = band(c.kind, c.window_side()); break;
    case Experiment::CrossingCurves:
        j["band_km"] = nlohmann::ordered_json::array();
        for (double w : c.windows) j["band_km"].push_back(band(c.kind, w));
        break;
    case Experiment::Table1:
        for (TessellationKind kind : {TessellationKind::PVT, TessellationKind::PDT}) {
            auto& b = j["band_km"][to_string(kind)] = nlohmann::ordered_json::array();
            for (double rg : c.r_gamma_list) b.push_back(band(kind, c.window_for(rg)));
        }
        break;
    }
    if (c.experiment == Experiment::Theta) {
        j["n"] = c.n;
        j["M"] = c.M;
        if (c.samples) j["samples"] = *c.samples;
    } else {
        j["runs"] = c.run_count();
    }
    if (c.experiment == Experiment::Stretch) j["min_dist_km"] = c.min_dist;
    if (c.experiment == Experiment::Threshold || c.experiment == Experiment::CrossingCurves ||
        c.experiment == Experiment::Table1) {
        j["grid_points"] = c.grid_points;
        j["p_crit"] = c.p_crit;
        j["fit"] = c.fit == FitMethod::LeastSquares ? "ols" : "mle";
    }
    if (c.budget) j["budget"] = *c.budget;
    j["seed"] = c.seed;
    j["plots"] = c.plots;
    return j;
}

/// Re-renders the SVG plots of an output directory from its CSV files.
inline void replot(const fs::path& dir);

class Runner {
public:
    Runner(ExperimentConfig config, unsigned workers) : cfg_(std::move(config)), workers_(std::max(1u, workers)) {}

    RunReport run() {
        out_ = cfg_.out;
        fs::create_directories(out_);
        const RngState root{cfg_.seed, 0};
        switch (cfg_.experiment) {
        case Experiment::Threshold: threshold(root); break;
        case Experiment::CrossingCurves: crossing_curves(root); break;
        case Experiment::Theta: theta(root); break;
        case Experiment::Stretch: stretch(root); break;
        case Experiment::Table1: table1(root); break;
        }
        write_manifest();
        if (cfg_.plots) replot(out_);
        return report_;
    }

private:
    ExperimentConfig cfg_;
    unsigned workers_;
    fs::path out_;
    RunReport report_;
    nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();

    void record(const std::string& file, std::size_t rows, const std::string& what) {
        outputs_.push_back({{"file", file}, {"rows", rows}, {"contents", what}});
        report_.files.push_back(file);
    }

    template <class Writer>
    void emit(const std::string& file, std::size_t rows, const std::string& what, Writer&& w) {
        fs::create_directories((out_ / file).parent_path());
        io::write_file((out_ / file).string(), w);
        record(file, rows, what);
    }

    static bool key_matches(const fs::path& csv, const std::string& key) {
        fs::path k = csv;
        k += ".key";
        if (!fs::exists(csv) || !fs::exists(k)) return false;
        std::ifstream in(k, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str() == key;
    }

    static void write_key(const fs::path& csv, const std::string& key) {
        fs::path k = csv;
        k += ".key";
        io::write_file(k.string(), [&](std::ostream& o) { o << key; });
    }

    std::size_t chunk() const { return static_cast<std::size_t>(workers_) * 4; }

    // Crossing runs -----------------------------------------------------------

    std::vector<CrossingRun> crossing_runs(const std::string& file, const ThresholdSetup& s, std::uint64_t budget,
                                           RngState rng) {
        const fs::path path = out_ / file;
        fs::create_directories(path.parent_path());
        std::ostringstream key;
        key << "crossing-runs v1 kind=" << to_string(s.kind) << " gamma=" << io::num(s.gamma) << " r=" << io::num(s.r)
            << " side=" << io::num(s.side) << " budget=" << budget << " seed=" << rng.seed << " stream=" << rng.stream
            << '\n';
        std::map<int, CrossingRun> have;
        if (key_matches(path, key.str())) {
            auto in = io::open_input(path.string());
            for (const CrossingRun& r : io::read_crossing_runs(in))
                if (r.index >= 0 && r.index < s.runs) have[r.index] = r;
        }
        report_.reused += have.size();
        std::vector<int> missing;
        for (int i = 0; i < s.runs; ++i)
            if (!have.count(i)) missing.push_back(i);
        auto save = [&] {
            std::vector<CrossingRun> v;
            for (const auto& [i, r] : have) v.push_back(r);
            io::write_file(path.string(), [&](std::ostream& o) { io::write_crossing_runs(o, v); });
            write_key(path, key.str());
        };
        for (std::size_t from = 0; from < missing.size(); from += chunk()) {
            const std::size_t to = std::min(missing.size(), from + chunk());
            std::vector<CrossingRun> batch(to - from);
            parallel_for(batch.size(), workers_, [&](std::size_t j) {
                const int i = missing[from + j];
                batch[j] = run_crossing(s.kind, s.gamma, s.r, s.side, rng.child(static_cast<std::uint64_t>(i)), budget, i);
            });
            for (const CrossingRun& r : batch) have[r.index] = r;
            report_.simulated += batch.size();
            save();
        }
        if (missing.empty() && !fs::exists(path)) save();
        std::vector<CrossingRun> out;
        for (const auto& [i, r] : have) out.push_back(r);
        record(file, out.size(), "crossing runs: devices N at first wrap per run");
        return out;
    }

    ThresholdSetup setup(TessellationKind kind, double r, double side) const {
        ThresholdSetup s;
        s.kind = kind;
        s.gamma = cfg_.gamma;
        s.r = r;
        s.side = side;
        s.runs = cfg_.run_count();
        s.budget = cfg_.budget;
        return s;
    }

    double max_lambda() const { return cfg_.lambdas.empty() ? 0.0 : *std::max_element(cfg_.lambdas.begin(), cfg_.lambdas.end()); }

    // Experiments -----------------------------------------------------------

    void threshold(RngState root) {
        const double r = cfg_.radius();
        const ThresholdSetup s = setup(cfg_.kind, r, cfg_.window_side());
        const std::uint64_t budget = threshold_budget(s, max_lambda());
        const auto runs = crossing_runs("crossing_runs.csv", s, budget, root);
        const auto grid = cfg_.lambdas.empty() ? auto_lambda_grid(runs, cfg_.grid_points) : cfg_.lambdas;
        const auto e = estimate_threshold(runs, grid, root, cfg_.fit, cfg_.p_crit);
        emit("curve.csv", e.curve.size(), "crossing probability p_hat per lambda",
             [&](std::ostream& o) { io::write_curve(o, e.curve); });
        emit("threshold.csv", 1, "logistic fit and critical intensity", [&](std::ostream& o) {
            o << "kind,gamma,r,r_gamma,window,runs,a,b,a_std_error,b_std_error,p_crit,lambda_c,lambda_c_over_gamma,"
                 "pbm_lambda_c_over_gamma\n";
            o << to_string(s.kind) << ',' << io::num(s.gamma) << ',' << io::num(r) << ',' << io::num(r * s.gamma) << ','
              << io::num(s.side) << ',' << s.runs << ',' << io::num(e.fit.a) << ',' << io::num(e.fit.b) << ','
              << io::num(e.fit.a_std_error) << ',' << io::num(e.fit.b_std_error) << ',' << io::num(cfg_.p_crit) << ','
              << io::num(e.lambda_c) << ',' << io::num(e.lambda_c / s.gamma) << ','
              << io::num(pbm_threshold(r * s.gamma)) << '\n';
        });
        std::cout << to_string(s.kind) << " r*gamma=" << io::short_num(r * s.gamma)
                  << ": lambda_c/gamma=" << io::short_num(e.lambda_c / s.gamma) << '\n';
    }

    void crossing_curves(RngState root) {
        const double r = cfg_.radius();
        std::vector<std::vector<CrossingRun>> per_window;
        std::vector<CrossingRun> pooled;
        for (double w : cfg_.windows) {
            const ThresholdSetup s = setup(cfg_.kind, r, w);
            per_window.push_back(crossing_runs("crossing_runs_L" + window_tag(w) + ".csv", s,
                                               threshold_budget(s, max_lambda()),
                                               root.child(0xc0ULL, std::bit_cast<std::uint64_t>(w))));
            pooled.insert(pooled.end(), per_window.back().begin(), per_window.back().end());
        }
        const auto grid = cfg_.lambdas.empty() ? auto_lambda_grid(pooled, cfg_.grid_points) : cfg_.lambdas;
        std::ostringstream fits;
        fits << "window,a,b,a_std_error,b_std_error,lambda_c,lambda_c_over_gamma\n";
        for (std::size_t k = 0; k < cfg_.windows.size(); ++k) {
            const double w = cfg_.windows[k];
            const RngState rng = root.child(0xc0ULL, std::bit_cast<std::uint64_t>(w));
            const auto curve = crossing_curve(per_window[k], grid, rng);
            emit("curve_L" + window_tag(w) + ".csv", curve.size(), "crossing probability for window " + window_tag(w) + " km",
                 [&](std::ostream& o) { io::write_curve(o, curve); });
            double a = NAN, b = NAN, sa = NAN, sb = NAN, lc = NAN;
            try {
                const LogisticFit f = fit_logistic(curve, cfg_.fit);
                a = f.a, b = f.b, sa = f.a_std_error, sb = f.b_std_error;
                lc = lambda_c_from_fit(f, cfg_.p_crit);
            } catch (const Error& err) {
                std::cerr << "warning: window " << window_tag(w) << " km: " << err.what() << '\n';
            }
            fits << io::num(w) << ',' << num_or_nan(a) << ',' << num_or_nan(b) << ',' << num_or_nan(sa) << ','
                 << num_or_nan(sb) << ',' << num_or_nan(lc) << ',' << num_or_nan(lc / cfg_.gamma) << '\n';
        }
        emit("crossing_fits.csv", cfg_.windows.size(), "logistic fit per window",
             [&](std::ostream& o) { o << fits.str(); });
    }

    std::vector<ThetaSample> theta_samples(RngState root, double r, double side, std::uint64_t budget) {
        const fs::path path = out_ / "theta_samples.csv";
        std::ostringstream key;
        key << "theta-samples v1 kind=" << to_string(cfg_.kind) << " gamma=" << io::num(cfg_.gamma)
            << " r=" << io::num(r) << " side=" << io::num(side) << " budget=" << budget << " seed=" << root.seed
            << '\n';
        std::map<std::pair<int, int>, ThetaSample> have;
        if (key_matches(path, key.str())) {
            auto in = io::open_input(path.string());
            for (const ThetaSample& s : io::read_theta_samples(in))
                if (s.k >= 0 && s.k < cfg_.n && s.i >= 0 && s.i < cfg_.M) have[{s.k, s.i}] = s;
        }
        report_.reused += have.size();
        auto save = [&] {
            std::vector<ThetaSample> v;
            for (const auto& [ki, s] : have) v.push_back(s);
            io::write_file(path.string(), [&](std::ostream& o) { io::write_theta_samples(o, v); });
            write_key(path, key.str());
        };
        bool saved = false;
        for (int k = 0; k < cfg_.n; ++k) {
            std::vector<int> missing;
            for (int i = 0; i < cfg_.M; ++i)
                if (!have.count({k, i})) missing.push_back(i);
            if (missing.empty()) continue;
            const Tessellation t = sample_street_system(cfg_.kind, cfg_.gamma, side, theta_tessellation_stream(root, k));
            if (t.nu1() == 0.0) throw InvalidState("sampled street system is empty; enlarge the window");
            std::vector<ThetaSample> batch(missing.size());
            parallel_for(batch.size(), workers_,
                         [&](std::size_t j) { batch[j] = run_theta_trial(t, k, missing[j], r, root, budget); });
            for (const ThetaSample& s : batch) have[{s.k, s.i}] = s;
            report_.simulated += batch.size();
            save();
            saved = true;
        }
        if (!saved && !fs::exists(path)) save();
        std::vector<ThetaSample> out;
        for (const auto& [ki, s] : have) out.push_back(s);
        record("theta_samples.csv", out.size(), "placement runs: devices N before the origin joined a wrapping component");
        return out;
    }

    void theta(RngState root) {
        const double r = cfg_.radius();
        const double side = cfg_.window_side();
        std::vector<ThetaSample> samples;
        if (cfg_.samples) {
            auto in = io::open_input(*cfg_.samples);
            samples = io::read_theta_samples(in);
            report_.reused += samples.size();
        } else {
            const std::uint64_t budget =
                cfg_.budget_for(cfg_.gamma * pbm_threshold(r * cfg_.gamma), side);
            samples = theta_samples(root, r, side, budget);
        }
        emit("theta.csv", cfg_.lambdas.size(), "percolation probability per lambda", [&](std::ostream& o) {
            o << "lambda,lambda_over_gamma,theta,std_error,censored\n";
            for (double l : cfg_.lambdas) {
                const ThetaEstimate e = estimate_theta(samples, l);
                o << io::num(l) << ',' << io::num(l / cfg_.gamma) << ',' << io::num(e.value) << ','
                  << io::num(e.std_error) << ',' << e.censored << '\n';
            }
        });
    }

    struct StretchRecord {
        double lambda = 0.0;
        int run = 0;
        std::size_t devices = 0, wrapping = 0, pairs = 0;
        double sum_ratio = 0.0, sum_ratio2 = 0.0, sum_hd = 0.0, sum_dd = 0.0;
    };

    static constexpr const char* kStretchHeader = "lambda,run,devices,wrapping,pairs,sum_ratio,sum_ratio2,sum_hd,sum_dd";

    static StretchRecord summarize_run(double lambda, const StretchRun& run) {
        StretchRecord rec{lambda, run.index, run.devices, run.wrapping, run.samples.size()};
        for (const StretchSample& s : run.samples) {
            const double ratio = s.hops / s.euclid;
            rec.sum_ratio += ratio;
            rec.sum_ratio2 += ratio * ratio;
            rec.sum_hd += s.hops * s.euclid;
            rec.sum_dd += s.euclid * s.euclid;
        }
        return rec;
    }

    void stretch(RngState root) {
        const double r = cfg_.radius();
        const double side = cfg_.window_side();
        const int runs = cfg_.run_count();
        if (!(cfg_.min_dist < side)) throw ConfigError("min_dist: must be smaller than the window side");
        const fs::path path = out_ / "stretch_runs.csv";
        std::ostringstream key;
        key << "stretch-runs v1 kind=" << to_string(cfg_.kind) << " gamma=" << io::num(cfg_.gamma)
            << " r=" << io::num(r) << " side=" << io::num(side) << " min_dist=" << io::num(cfg_.min_dist)
            << " seed=" << root.seed << '\n';
        std::map<std::pair<std::uint64_t, int>, StretchRecord> have;
        if (key_matches(path, key.str())) {
            auto in = io::open_input(path.string());
            io::detail::read_rows(in, kStretchHeader, [&](const std::vector<std::string>& f) {
                StretchRecord rec{std::stod(f[0]), std::stoi(f[1]), std::stoull(f[2]), std::stoull(f[3]),
                                  std::stoull(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7]), std::stod(f[8])};
                have[{std::bit_cast<std::uint64_t>(rec.lambda), rec.run}] = rec;
            });
        }
        auto save = [&] {
            io::write_file(path.string(), [&](std::ostream& o) {
                o << kStretchHeader << '\n';
                for (const auto& [k, rec] : have)
                    o << io::num(rec.lambda) << ',' << rec.run << ',' << rec.devices << ',' << rec.wrapping << ','
                      << rec.pairs << ',' << io::num(rec.sum_ratio) << ',' << io::num(rec.sum_ratio2) << ','
                      << io::num(rec.sum_hd) << ',' << io::num(rec.sum_dd) << '\n';
            });
            write_key(path, key.str());
        };
        std::ostringstream table;
        table << "lambda,lambda_over_gamma,mu_hat,std_error,slope,pairs,runs_with_pairs,inverse_r\n";
        std::size_t rows = 0;
        for (double lambda : cfg_.lambdas) {
            const std::uint64_t lk = std::bit_cast<std::uint64_t>(lambda);
            const RngState rng = root.child(0x5eULL, lk);
            std::vector<int> missing;
            for (int i = 0; i < runs; ++i) {
                if (have.count({lk, i})) ++report_.reused;
                else missing.push_back(i);
            }
            for (std::size_t from = 0; from < missing.size(); from += chunk()) {
                const std::size_t to = std::min(missing.size(), from + chunk());
                std::vector<StretchRecord> batch(to - from);
                parallel_for(batch.size(), workers_, [&](std::size_t j) {
                    const int i = missing[from + j];
                    batch[j] = summarize_run(lambda, run_stretch(cfg_.kind, cfg_.gamma, r, lambda, side, cfg_.min_dist,
                                                                 rng.child(static_cast<std::uint64_t>(i)), i));
                });
                for (const StretchRecord& rec : batch) have[{lk, rec.run}] = rec;
                report_.simulated += batch.size();
                save();
            }
            double pairs = 0, sum = 0, sum2 = 0, hd = 0, dd = 0;
            std::vector<double> per_run;
            for (int i = 0; i < runs; ++i) {
                const StretchRecord& rec = have.at({lk, i});
                pairs += static_cast<double>(rec.pairs);
                sum += rec.sum_ratio;
                sum2 += rec.sum_ratio2;
                hd += rec.sum_hd;
                dd += rec.sum_dd;
                if (rec.pairs > 0) per_run.push_back(rec.sum_ratio / static_cast<double>(rec.pairs));
            }
            double mu = NAN, se = NAN, slope = NAN;
            if (pairs > 0) {
                mu = sum / pairs;
                slope = hd / dd;
                if (per_run.size() > 1) {
                    double m = 0.0, v = 0.0;
                    for (double x : per_run) m += x;
                    m /= static_cast<double>(per_run.size());
                    for (double x : per_run) v += (x - m) * (x - m);
                    se = std::sqrt(v / static_cast<double>(per_run.size() - 1) / static_cast<double>(per_run.size()));
                }
            } else {
                std::cerr << "warning: lambda " << io::short_num(lambda)
                          << ": no wrapping-component pairs farther apart than min_dist\n";
            }
            table << io::num(lambda) << ',' << io::num(lambda / cfg_.gamma) << ',' << num_or_nan(mu) << ','
                  << num_or_nan(se) << ',' << num_or_nan(slope) << ',' << static_cast<std::uint64_t>(pairs) << ','
                  << per_run.size() << ',' << io::num(1.0 / r) << '\n';
            ++rows;
        }
        if (!fs::exists(path)) save();
        record("stretch_runs.csv", have.size(), "per-run pair sums for the stretch factor");
        emit("stretch.csv", rows, "stretch factor per lambda", [&](std::ostream& o) { o << table.str(); });
    }

    void table1(RngState root) {
        std::ostringstream table, fits;
        table << "r_gamma,pvt_lambda_c_over_gamma,pdt_lambda_c_over_gamma,pbm_lambda_c_over_gamma\n";
        fits << "r_gamma,kind,window,runs,a,b,lambda_c_over_gamma\n";
        for (double rg : cfg_.r_gamma_list) {
            double value[2] = {NAN, NAN};
            for (TessellationKind kind : {TessellationKind::PVT, TessellationKind::PDT}) {
                const int kid = kind == TessellationKind::PVT ? 0 : 1;
                const double side = cfg_.window_for(rg);
                const ThresholdSetup s = setup(kind, cfg_.radius_for(rg), side);
                const RngState rng = root.child(static_cast<std::uint64_t>(kid), std::bit_cast<std::uint64_t>(rg));
                const auto runs = crossing_runs("table1_runs/" + std::string(to_string(kind)) + "_rg" +
                                                    window_tag(rg) + ".csv",
                                                s, threshold_budget(s), rng);
                double a = NAN, b = NAN;
                try {
                    const auto e = estimate_threshold(runs, auto_lambda_grid(runs, cfg_.grid_points), rng, cfg_.fit,
                                                      cfg_.p_crit);
                    a = e.fit.a, b = e.fit.b;
                    value[kid] = e.lambda_c / cfg_.gamma;
                } catch (const Error& err) {
                    std::cerr << "warning: " << to_string(kind) << " r*gamma=" << io::short_num(rg) << ": "
                              << err.what() << '\n';
                }
                fits << io::num(rg) << ',' << to_string(kind) << ',' << io::num(side) << ',' << s.runs << ','
                     << num_or_nan(a) << ',' << num_or_nan(b) << ',' << num_or_nan(value[kid]) << '\n';
            }
            table << io::num(rg) << ',' << num_or_nan(value[0]) << ',' << num_or_nan(value[1]) << ','
                  << io::num(pbm_threshold(rg)) << '\n';
            std::cout << "r*gamma=" << io::short_num(rg) << "  PVT " << io::short_num(value[0]) << "  PDT "
                      << io::short_num(value[1]) << "  PBM " << io::short_num(pbm_threshold(rg)) << '\n';
        }
        emit("table1.csv", cfg_.r_gamma_list.size(), "critical intensities lambda_c/gamma per r*gamma",
             [&](std::ostream& o) { o << table.str(); });
        emit("table1_fits.csv", 2 * cfg_.r_gamma_list.size(), "logistic fits behind table1.csv",
             [&](std::ostream& o) { o << fits.str(); });
    }

    void write_manifest() {
        nlohmann::ordered_json m;
        m["tool"] = "streetperc";
        m["version"] = kVersion;
        m["experiment"] = to_string(cfg_.experiment);
        m["seed"] = cfg_.seed;
        m["config"] = config_json(cfg_);
        m["outputs"] = outputs_;
        io::write_file((out_ / "manifest.json").string(), [&](std::ostream& o) { o << m.dump(2) << '\n'; });
    }
};

// Plots ---------------------------------------------------------------------

inline LineChart curve_chart(const CsvTable& t, const std::string& label, double gamma) {
    PlotSeries s{label, {}};
    for (std::size_t i = 0; i < t.rows.size(); ++i) s.points.push_back({t.number(i, "lambda") / gamma, t.number(i, "p_hat")});
    return {"Crossing probability", "lambda / gamma", "p_hat", {s}};
}

inline void replot(const fs::path& dir) {
    auto in = io::open_input((dir / "manifest.json").string());
    const auto m = nlohmann::json::parse(in);
    const std::string experiment = m.at("experiment");
    const auto& cfg = m.at("config");
    const double gamma = cfg.at("gamma_per_km");
    if (!cfg.value("plots", true)) return;

    if (experiment == "threshold") {
        const CsvTable curve = read_csv(dir / "curve.csv");
        const CsvTable fit = read_csv(dir / "threshold.csv");
        LineChart chart = curve_chart(curve, "simulated", gamma);
        const double a = fit.number(0, "a"), b = fit.number(0, "b");
        PlotSeries model{"logistic fit", {}};
        if (!curve.rows.empty()) {
            const double lo = curve.number(0, "lambda"), hi = curve.number(curve.rows.size() - 1, "lambda");
            for (int k = 0; k <= 60; ++k) {
                const double l = lo + (hi - lo) * k / 60.0;
                model.points.push_back({l / gamma, 1.0 / (1.0 + std::exp(-(a * l + b)))});
            }
        }
        chart.series.push_back(model);
        write_svg((dir / "curve.svg").string(), chart);
    } else if (experiment == "crossing-curves") {
        LineChart chart{"Crossing probability by window size", "lambda / gamma", "p_hat", {}};
        for (double w : cfg.at("windows_km").get<std::vector<double>>()) {
            const CsvTable t = read_csv(dir / ("curve_L" + window_tag(w) + ".csv"));
            chart.series.push_back(curve_chart(t, "L = " + window_tag(w) + " km", gamma).series[0]);
        }
        write_svg((dir / "crossing_curves.svg").string(), chart);
    } else if (experiment == "theta") {
        const CsvTable t = read_csv(dir / "theta.csv");
        PlotSeries s{std::string(cfg.at("kind")), {}};
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            s.points.push_back({t.number(i, "lambda_over_gamma"), t.number(i, "theta")});
        write_svg((dir / "theta.svg").string(), {"Percolation probability", "lambda / gamma", "theta_hat", {s}});
    } else if (experiment == "stretch") {
        const CsvTable t = read_csv(dir / "stretch.csv");
        PlotSeries s{std::string(cfg.at("kind")), {}}, bound{"1 / r", {}};
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            s.points.push_back({t.number(i, "lambda_over_gamma"), t.number(i, "mu_hat")});
            bound.points.push_back({t.number(i, "lambda_over_gamma"), t.number(i, "inverse_r")});
        }
        write_svg((dir / "stretch.svg").string(), {"Stretch factor", "lambda / gamma", "mu_hat (hops/km)", {s, bound}});
    } else if (experiment == "table1") {
        const CsvTable t = read_csv(dir / "table1.csv");
        PlotSeries pvt{"PVT", {}}, pdt{"PDT", {}}, pbm{"PBM", {}};
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double rg = t.number(i, "r_gamma");
            pvt.points.push_back({rg, std::log10(t.number(i, "pvt_lambda_c_over_gamma"))});
            pdt.points.push_back({rg, std::log10(t.number(i, "pdt_lambda_c_over_gamma"))});
            pbm.points.push_back({rg, std::log10(t.number(i, "pbm_lambda_c_over_gamma"))});
        }
        write_svg((dir / "table1.svg").string(),
                  {"Critical intensity", "r * gamma", "log10(lambda_c / gamma)", {pvt, pdt, pbm}});
    } else {
        throw Error("manifest names unknown experiment '" + experiment + "'");
    }
}

inline RunReport run_experiment(const ExperimentConfig& config, unsigned workers) {
    return Runner(config, workers).run();
}

} // namespace streetperc::cli
