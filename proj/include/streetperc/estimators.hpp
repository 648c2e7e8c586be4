#pragma once

#include <streetperc/cox.hpp>
#include <streetperc/error.hpp>
#include <streetperc/geometry.hpp>
#include <streetperc/graph.hpp>
#include <streetperc/tessellation.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace streetperc {

// Poisson tail -----------------------------------------------------------

/// P(J >= k) for J ~ Poisson(mean), via the regularized lower incomplete
/// gamma function P(k, mean).
inline double poisson_upper_tail(std::uint64_t k, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidParameter("Poisson mean must be finite and >= 0");
    if (k == 0) return 1.0;
    if (mean == 0.0) return 0.0;
    return boost::math::gamma_p(static_cast<double>(k), mean);
}

// Percolation probability ------------------------------------------------

/// Outcome of one sequential placement run on tessellation k: N devices
/// (origin excluded) were needed before the origin's component wrapped.
struct ThetaSample {
    int k = 0;
    int i = 0;
    std::uint64_t N = 0;
    double nu1 = 0.0;
    bool censored = false; // budget exhausted before wrapping; N is the budget
};

struct ThetaEstimate {
    double value = 0.0;
    double std_error = 0.0; // across tessellations
    std::size_t censored = 0;
};

/// theta_hat(lambda): average over runs of P(J >= N_{k,i}) with
/// J ~ Poisson(lambda * nu1(t_k)), runs of one tessellation averaged first.
/// Censored runs contribute zero and are counted in the result.
inline ThetaEstimate estimate_theta(const std::vector<ThetaSample>& samples, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("lambda must be >= 0");
    ThetaEstimate out;
    if (samples.empty()) return out;
    int max_k = 0;
    for (const ThetaSample& s : samples) max_k = std::max(max_k, s.k);
    std::vector<double> sum(static_cast<std::size_t>(max_k) + 1, 0.0);
    std::vector<int> count(sum.size(), 0);
    for (const ThetaSample& s : samples) {
        const auto idx = static_cast<std::size_t>(s.k);
        ++count[idx];
        if (s.censored) {
            ++out.censored;
            continue;
        }
        const std::uint64_t n = kOriginCountsTowardJ ? s.N + 1 : s.N;
        sum[idx] += poisson_upper_tail(n, lambda * s.nu1);
    }
    std::vector<double> per_k;
    for (std::size_t k = 0; k < sum.size(); ++k)
        if (count[k] > 0) per_k.push_back(sum[k] / count[k]);
    double mean = 0.0;
    for (double v : per_k) mean += v;
    mean /= static_cast<double>(per_k.size());
    double var = 0.0;
    for (double v : per_k) var += (v - mean) * (v - mean);
    out.value = std::clamp(mean, 0.0, 1.0);
    if (per_k.size() > 1) out.std_error = std::sqrt(var / static_cast<double>(per_k.size() - 1) / static_cast<double>(per_k.size()));
    return out;
}

inline double theta_hat(const std::vector<ThetaSample>& samples, double lambda) {
    return estimate_theta(samples, lambda).value;
}

// Crossing curves and the logistic model -----------------------------------

struct CrossingCurvePoint {
    double lambda = 0.0;
    double p_hat = 0.0;
    int runs = 0;
};

struct LogisticFit {
    double a = 0.0; // slope, km
    double b = 0.0; // intercept
    double a_std_error = 0.0;
    double b_std_error = 0.0;
    double residual = 0.0; // sum of squared logit residuals

    double probability(double lambda) const { return 1.0 / (1.0 + std::exp(-(a * lambda + b))); }
};

enum class FitMethod { LeastSquares, MaximumLikelihood };

inline double logit(double p) { return std::log(p / (1.0 - p)); }

namespace detail {

inline double clipped(const CrossingCurvePoint& pt) {
    const double lo = 1.0 / (2.0 * std::max(pt.runs, 1));
    return std::clamp(pt.p_hat, lo, 1.0 - lo);
}

inline LogisticFit least_squares_logit(const std::vector<CrossingCurvePoint>& pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& pt : pts) {
        mx += pt.lambda;
        my += logit(clipped(pt));
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& pt : pts) {
        sxx += (pt.lambda - mx) * (pt.lambda - mx);
        sxy += (pt.lambda - mx) * (logit(clipped(pt)) - my);
    }
    if (!(sxx > 0.0)) throw UnfittableCurve("crossing curve needs at least two distinct lambda values");
    LogisticFit f;
    f.a = sxy / sxx;
    f.b = my - f.a * mx;
    for (const auto& pt : pts) {
        const double e = logit(clipped(pt)) - (f.a * pt.lambda + f.b);
        f.residual += e * e;
    }
    if (pts.size() > 2) {
        const double s2 = f.residual / (n - 2.0);
        f.a_std_error = std::sqrt(s2 / sxx);
        f.b_std_error = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return f;
}

// Binomial maximum likelihood by Newton-Raphson, started from least squares.
inline LogisticFit maximum_likelihood_logit(const std::vector<CrossingCurvePoint>& pts) {
    LogisticFit f = least_squares_logit(pts);
    double a = f.a, b = f.b;
    double haa = 0, hab = 0, hbb = 0;
    for (int iter = 0; iter < 100; ++iter) {
        double ga = 0, gb = 0;
        haa = hab = hbb = 0;
        for (const auto& pt : pts) {
            const double m = 1.0 / (1.0 + std::exp(-(a * pt.lambda + b)));
            const double w = pt.runs * m * (1.0 - m);
            const double e = pt.runs * (pt.p_hat - m);
            ga += e * pt.lambda;
            gb += e;
            haa += w * pt.lambda * pt.lambda;
            hab += w * pt.lambda;
            hbb += w;
        }
        const double det = haa * hbb - hab * hab;
        if (!(det > 0.0)) throw UnfittableCurve("logistic likelihood is degenerate (separable data)");
        const double da = (hbb * ga - hab * gb) / det;
        const double db = (haa * gb - hab * ga) / det;
        a += da;
        b += db;
        if (std::abs(da) <= 1e-12 * (1.0 + std::abs(a)) && std::abs(db) <= 1e-12 * (1.0 + std::abs(b))) break;
    }
    const double det = haa * hbb - hab * hab;
    f.a = a;
    f.b = b;
    f.a_std_error = std::sqrt(hbb / det);
    f.b_std_error = std::sqrt(haa / det);
    return f;
}

} // namespace detail

/// Fits logit(p) = a * lambda + b. Saturated estimates (0 or 1) are clipped
/// to [1/(2 runs), 1 - 1/(2 runs)] before taking the logit.
inline LogisticFit fit_logistic(const std::vector<CrossingCurvePoint>& points,
                                FitMethod method = FitMethod::LeastSquares) {
    if (points.size() < 2) throw UnfittableCurve("need at least two crossing-curve points");
    const bool any_interior = std::any_of(points.begin(), points.end(),
                                          [](const CrossingCurvePoint& p) { return p.p_hat > 0.0 && p.p_hat < 1.0; });
    if (!any_interior) throw UnfittableCurve("every crossing estimate is saturated at 0 or 1");
    return method == FitMethod::LeastSquares ? detail::least_squares_logit(points)
                                             : detail::maximum_likelihood_logit(points);
}

/// Crossing probability at which the threshold is read off the fitted curve.
inline constexpr double kCriticalCrossingProbability = 0.6;

/// lambda at which the fitted curve reaches p_crit (default 0.6).
inline double lambda_c_from_fit(const LogisticFit& fit, double p_crit = kCriticalCrossingProbability) {
    if (!(fit.a > 0.0)) throw NonPercolatingFit("fitted crossing curve is not increasing in lambda");
    return (logit(p_crit) - fit.b) / fit.a;
}

// Closed-form approximations ---------------------------------------------

/// Poisson Boolean model threshold lambda_c / gamma ~ 4.51 / (pi (r gamma)^2).
inline double pbm_threshold(double r_gamma) {
    if (!(r_gamma > 0.0)) throw InvalidParameter("r*gamma must be positive");
    return 4.51 / (std::numbers::pi * r_gamma * r_gamma);
}

/// Smallest positive root lambda of (lambda / gamma) exp(-r lambda) = -log(b_c),
/// read literally with r in km and lambda per km.
inline double bernoulli_threshold(double gamma, double r, double b_c = 0.5) {
    if (!(gamma > 0.0) || !(r > 0.0)) throw InvalidParameter("gamma and r must be positive");
    if (!(b_c > 0.0 && b_c < 1.0)) throw InvalidParameter("b_c must lie in (0, 1)");
    const double target = -std::log(b_c);
    auto lhs = [&](double lambda) { return lambda / gamma * std::exp(-r * lambda); };
    // lhs rises on (0, 1/r) and falls afterwards; the smallest root is below 1/r.
    const double upper = std::min(1.0 / r, 1e6 / gamma);
    if (lhs(upper) < target) throw NoRoot("no root: maximum of the left-hand side is below -log(b_c)");
    double lo = 0.0, hi = upper;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (lhs(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Simulation runs ----------------------------------------------------------

/// Default device budget: 50 times the expected device count at the
/// reference intensity.
inline std::uint64_t default_budget(double lambda_ref, double nu1) {
    return static_cast<std::uint64_t>(std::ceil(50.0 * lambda_ref * nu1)) + 1;
}

/// Fresh tessellation and Cox sample per run; fraction of runs whose Gilbert
/// graph has a wrapping component.
inline CrossingCurvePoint estimate_crossing_probability(TessellationKind kind, double gamma, double r, double lambda,
                                                        double side, int runs, RngState rng) {
    if (runs < 1) throw InvalidParameter("runs must be >= 1");
    int hits = 0;
    for (int run = 0; run < runs; ++run) {
        const RngState key = rng.child(static_cast<std::uint64_t>(run));
        const Tessellation t = sample_street_system(kind, gamma, side, key.child(0));
        if (lambda == 0.0 || t.nu1() == 0.0) continue;
        const DeviceSet d = sample_cox(t, lambda, key.child(1));
        const GilbertGraph g = build_gilbert(d, r, t.window());
        WrapUnionFind uf = wrap_components(g);
        bool wraps = false;
        for (std::size_t i = 0; i < g.size() && !wraps; ++i) wraps = uf.flags(static_cast<int>(i)).any();
        hits += wraps ? 1 : 0;
    }
    return {lambda, static_cast<double>(hits) / runs, runs};
}

/// Sequential crossing run: devices are added one at a time until some
/// component wraps. The Gilbert graph of the first J devices is a Cox sample
/// whenever J ~ Poisson(lambda nu1), so one run serves every lambda.
struct CrossingRun {
    int index = 0;
    std::uint64_t N = 0; // devices present when a component first wrapped
    double nu1 = 0.0;
    bool censored = false;
};

inline CrossingRun run_crossing(TessellationKind kind, double gamma, double r, double side, RngState rng,
                                std::uint64_t budget, int index = 0) {
    CrossingRun out;
    out.index = index;
    const Tessellation t = sample_street_system(kind, gamma, side, rng.child(0));
    out.nu1 = t.nu1();
    if (t.nu1() == 0.0) {
        out.censored = true;
        return out;
    }
    SequentialSampler sampler(t, rng.child(1));
    IncrementalGilbert net(t.window(), r);
    while (net.size() < budget) {
        net.insert_device(sampler.next().position);
        if (net.any_wrapped()) {
            out.N = net.size();
            return out;
        }
    }
    out.N = budget;
    out.censored = true;
    return out;
}

/// Poisson device count of run `index` at intensity lambda; keyed by the
/// bit pattern of lambda so a new grid reuses draws for shared values.
inline std::uint64_t crossing_device_count(RngState rng, int index, double lambda, double nu1) {
    Engine eng = rng.child(static_cast<std::uint64_t>(index), 0x10000ULL + std::bit_cast<std::uint64_t>(lambda)).engine();
    return sample_poisson_count(lambda * nu1, eng);
}

/// p_hat(lambda) from stored crossing runs, for every lambda of the grid.
inline std::vector<CrossingCurvePoint> crossing_curve(const std::vector<CrossingRun>& runs,
                                                      const std::vector<double>& lambdas, RngState rng) {
    std::vector<CrossingCurvePoint> out;
    for (double lambda : lambdas) {
        if (!(lambda >= 0.0)) throw InvalidParameter("lambda must be >= 0");
        int hits = 0;
        for (const CrossingRun& run : runs) {
            const std::uint64_t J = crossing_device_count(rng, run.index, lambda, run.nu1);
            if (!run.censored && J >= run.N) ++hits;
            // A censored run that did not wrap within its budget cannot wrap with fewer devices.
            if (run.censored && J > run.N) throw InvalidState("device count exceeds the budget of a censored run");
        }
        out.push_back({lambda, runs.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(runs.size()),
                       static_cast<int>(runs.size())});
    }
    return out;
}

/// One placement run on tessellation t_k: an origin uniform on the streets,
/// then devices one at a time until the origin's component wraps.
inline ThetaSample run_theta_trial(const Tessellation& t, int k, int i, double r, RngState rng,
                                   std::uint64_t budget) {
    ThetaSample s{k, i, 0, t.nu1(), false};
    SequentialSampler sampler(t, rng.child(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i)));
    IncrementalGilbert net(t.window(), r);
    const int origin = net.insert_device(sampler.next().position).id;
    std::uint64_t placed = 0;
    bool wrapped = net.flags(origin).any();
    while (!wrapped && placed < budget) {
        net.insert_device(sampler.next().position);
        ++placed;
        wrapped = net.flags(origin).any();
    }
    s.N = placed;
    s.censored = !wrapped;
    return s;
}

/// M placement runs on tessellation t_k.
inline std::vector<ThetaSample> run_theta_trials(const Tessellation& t, int k, int M, double r, RngState rng,
                                                 std::uint64_t budget) {
    std::vector<ThetaSample> out;
    for (int i = 0; i < M; ++i) out.push_back(run_theta_trial(t, k, i, r, rng, budget));
    return out;
}

inline RngState theta_tessellation_stream(RngState rng, int k) {
    return rng.child(0x7e55ULL, static_cast<std::uint64_t>(k));
}

inline std::vector<ThetaSample> run_theta_experiment(TessellationKind kind, double gamma, double r, double side,
                                                     int n, int M, RngState rng, std::uint64_t budget) {
    if (n < 1 || M < 1) throw InvalidParameter("n and M must be >= 1");
    std::vector<ThetaSample> out;
    for (int k = 0; k < n; ++k) {
        const Tessellation t = sample_street_system(kind, gamma, side, theta_tessellation_stream(rng, k));
        if (t.nu1() == 0.0) throw InvalidState("sampled street system is empty; enlarge the window");
        auto runs = run_theta_trials(t, k, M, r, rng, budget);
        out.insert(out.end(), runs.begin(), runs.end());
    }
    return out;
}

// Stretch factor -----------------------------------------------------------

struct StretchSample {
    int hops = 0;
    double euclid = 0.0; // km
};

struct StretchEstimate {
    double mu_hat = 0.0;    // mean of hops / distance, hops per km
    double std_error = 0.0; // of the mean, treating pairs as independent
    double slope = 0.0;     // least squares through the origin, diagnostic
    std::size_t pairs = 0;
};

/// Pairs of wrapping-component devices whose planar separation exceeds
/// min_dist, with their hop count in the graph restricted to non-wrapping
/// edges (so hops and planar distances describe the same paths).
inline std::vector<StretchSample> stretch_samples(const GilbertGraph& g, double min_dist, double* max_sep = nullptr) {
    const std::vector<int> members = largest_wrapping_component(g);
    const auto& pos = g.positions();
    const double r = g.radius();
    std::vector<char> in_cluster(g.size(), 0);
    for (int m : members) in_cluster[static_cast<std::size_t>(m)] = 1;
    double far = 0.0;
    std::vector<StretchSample> out;
    for (std::size_t a = 0; a < members.size(); ++a) {
        const int s = members[a];
        bool has_partner = false;
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const double d = distance(pos[static_cast<std::size_t>(s)], pos[static_cast<std::size_t>(members[b])]);
            far = std::max(far, d);
            has_partner = has_partner || d > min_dist;
        }
        if (!has_partner) continue;
        const std::vector<int> hops = bfs_hops(g, s, [&](int u, const GilbertGraph::Neighbor& nb) {
            return distance(pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(nb.id)]) < r;
        });
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const int t = members[b];
            const double d = distance(pos[static_cast<std::size_t>(s)], pos[static_cast<std::size_t>(t)]);
            if (d <= min_dist || hops[static_cast<std::size_t>(t)] == kUnreachable) continue;
            out.push_back({hops[static_cast<std::size_t>(t)], d});
        }
    }
    if (max_sep) *max_sep = far;
    return out;
}

inline StretchEstimate summarize_stretch(const std::vector<StretchSample>& samples) {
    StretchEstimate e;
    e.pairs = samples.size();
    if (samples.empty()) return e;
    double sum = 0.0, sum2 = 0.0, sxy = 0.0, sxx = 0.0;
    for (const StretchSample& s : samples) {
        const double ratio = s.hops / s.euclid;
        sum += ratio;
        sum2 += ratio * ratio;
        sxy += s.hops * s.euclid;
        sxx += s.euclid * s.euclid;
    }
    const double n = static_cast<double>(samples.size());
    e.mu_hat = sum / n;
    e.slope = sxy / sxx;
    if (samples.size() > 1) e.std_error = std::sqrt(std::max(0.0, (sum2 - n * e.mu_hat * e.mu_hat) / (n - 1.0)) / n);
    return e;
}

/// Stretch factor estimate: mean hops per km over far-apart pairs of the
/// wrapping component.
inline StretchEstimate estimate_stretch(const GilbertGraph& g, double min_dist) {
    if (!(min_dist >= 0.0) || !(min_dist < g.window().side()))
        throw InvalidParameter("min_dist must lie in [0, window side)");
    double far = 0.0;
    const auto samples = stretch_samples(g, min_dist, &far);
    if (samples.empty())
        throw InsufficientPairs("no connected wrapping-component pairs farther apart than " + std::to_string(min_dist) +
                                    " km (largest separation " + std::to_string(far) + " km)",
                                far);
    return summarize_stretch(samples);
}

} // namespace streetperc
