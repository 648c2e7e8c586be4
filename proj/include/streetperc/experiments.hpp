#pragma once

// Batch drivers for the threshold, percolation-probability and stretch
// experiments. Each run draws from a stream keyed by its own index, so the
// results do not depend on the number of workers or their scheduling.

#include <streetperc/estimators.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace streetperc {

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Threshold ---------------------------------------------------------------

struct ThresholdSetup {
    TessellationKind kind = TessellationKind::PVT;
    double gamma = 20.0; // per km
    double r = 0.125;    // km
    double side = 10.0;  // km
    int runs = 50;
    std::optional<std::uint64_t> budget; // devices per run; default from the PBM reference
};

/// Budget covering 50 times the expected device count at the PBM reference
/// threshold (or at the largest lambda of an explicit grid, if larger).
inline std::uint64_t threshold_budget(const ThresholdSetup& s, double lambda_max = 0.0) {
    if (s.budget) return *s.budget;
    const double lambda_ref = std::max(lambda_max, s.gamma * pbm_threshold(s.r * s.gamma));
    return default_budget(lambda_ref, s.gamma * s.side * s.side);
}

inline std::vector<CrossingRun> run_crossing_batch(const ThresholdSetup& s, RngState rng, unsigned workers,
                                                   double lambda_max = 0.0) {
    if (s.runs < 1) throw InvalidParameter("runs must be >= 1");
    const std::uint64_t budget = threshold_budget(s, lambda_max);
    std::vector<CrossingRun> out(static_cast<std::size_t>(s.runs));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        out[i] = run_crossing(s.kind, s.gamma, s.r, s.side, rng.child(static_cast<std::uint64_t>(i)), budget,
                              static_cast<int>(i));
    });
    return out;
}

/// Evenly spaced lambda grid spanning the 5%..95% quantiles of the
/// per-run critical counts N / nu1.
inline std::vector<double> auto_lambda_grid(const std::vector<CrossingRun>& runs, int points = 10) {
    std::vector<double> q;
    for (const CrossingRun& r : runs)
        if (!r.censored && r.nu1 > 0.0) q.push_back(static_cast<double>(r.N) / r.nu1);
    if (q.size() < 2) throw UnfittableCurve("too few uncensored crossing runs to place a lambda grid");
    std::sort(q.begin(), q.end());
    auto quantile = [&](double f) {
        const double pos = f * static_cast<double>(q.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, q.size() - 1);
        return q[lo] + (pos - static_cast<double>(lo)) * (q[hi] - q[lo]);
    };
    const double lo = quantile(0.05), hi = quantile(0.95);
    std::vector<double> grid;
    for (int k = 0; k < points; ++k) grid.push_back(lo + (hi - lo) * k / std::max(points - 1, 1));
    return grid;
}

struct ThresholdEstimate {
    std::vector<CrossingCurvePoint> curve;
    LogisticFit fit;
    double lambda_c = 0.0;
};

inline ThresholdEstimate estimate_threshold(const std::vector<CrossingRun>& runs, const std::vector<double>& grid,
                                            RngState rng, FitMethod method = FitMethod::LeastSquares,
                                            double p_crit = kCriticalCrossingProbability) {
    ThresholdEstimate e;
    e.curve = crossing_curve(runs, grid, rng);
    e.fit = fit_logistic(e.curve, method);
    e.lambda_c = lambda_c_from_fit(e.fit, p_crit);
    return e;
}

/// Full pipeline: crossing runs, automatic grid, logistic fit.
inline ThresholdEstimate estimate_threshold(const ThresholdSetup& s, RngState rng, unsigned workers,
                                            int grid_points = 10) {
    const auto runs = run_crossing_batch(s, rng, workers);
    return estimate_threshold(runs, auto_lambda_grid(runs, grid_points), rng);
}

// Percolation probability -------------------------------------------------

inline std::vector<ThetaSample> run_theta_batch(TessellationKind kind, double gamma, double r, double side, int n,
                                                int M, RngState rng, std::uint64_t budget, unsigned workers) {
    if (n < 1 || M < 1) throw InvalidParameter("n and M must be >= 1");
    std::vector<std::optional<Tessellation>> tess(static_cast<std::size_t>(n));
    parallel_for(tess.size(), workers, [&](std::size_t k) {
        tess[k] = sample_street_system(kind, gamma, side, theta_tessellation_stream(rng, static_cast<int>(k)));
        if (tess[k]->nu1() == 0.0) throw InvalidState("sampled street system is empty; enlarge the window");
    });
    std::vector<ThetaSample> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(M));
    parallel_for(out.size(), workers, [&](std::size_t job) {
        const int k = static_cast<int>(job / static_cast<std::size_t>(M));
        const int i = static_cast<int>(job % static_cast<std::size_t>(M));
        out[job] = run_theta_trial(*tess[static_cast<std::size_t>(k)], k, i, r, rng, budget);
    });
    return out;
}

// Stretch factor ------------------------------------------------------------

struct StretchRun {
    int index = 0;
    std::size_t devices = 0;
    std::size_t wrapping = 0;
    std::vector<StretchSample> samples;
};

inline StretchRun run_stretch(TessellationKind kind, double gamma, double r, double lambda, double side,
                              double min_dist, RngState rng, int index = 0) {
    StretchRun out;
    out.index = index;
    const Tessellation t = sample_street_system(kind, gamma, side, rng.child(0));
    if (t.nu1() == 0.0) return out;
    const DeviceSet d = sample_cox(t, lambda, rng.child(1));
    const GilbertGraph g = build_gilbert(d, r, t.window());
    out.devices = g.size();
    out.wrapping = largest_wrapping_component(g).size();
    out.samples = stretch_samples(g, min_dist);
    return out;
}

inline std::vector<StretchRun> run_stretch_batch(TessellationKind kind, double gamma, double r, double lambda,
                                                 double side, double min_dist, int runs, RngState rng,
                                                 unsigned workers) {
    std::vector<StretchRun> out(static_cast<std::size_t>(runs));
    parallel_for(out.size(), workers, [&](std::size_t i) {
        out[i] = run_stretch(kind, gamma, r, lambda, side, min_dist, rng.child(static_cast<std::uint64_t>(i)),
                             static_cast<int>(i));
    });
    return out;
}

/// Pools the pairs of all runs into one estimate. The standard error is the
/// spread of per-run means, since pairs within a run are correlated.
inline StretchEstimate pool_stretch(const std::vector<StretchRun>& runs) {
    std::vector<StretchSample> all;
    std::vector<double> per_run;
    for (const StretchRun& r : runs) {
        all.insert(all.end(), r.samples.begin(), r.samples.end());
        if (!r.samples.empty()) per_run.push_back(summarize_stretch(r.samples).mu_hat);
    }
    StretchEstimate e = summarize_stretch(all);
    if (per_run.size() > 1) {
        double m = 0.0, v = 0.0;
        for (double x : per_run) m += x;
        m /= static_cast<double>(per_run.size());
        for (double x : per_run) v += (x - m) * (x - m);
        e.std_error = std::sqrt(v / static_cast<double>(per_run.size() - 1) / static_cast<double>(per_run.size()));
    }
    return e;
}

} // namespace streetperc
