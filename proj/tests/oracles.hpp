#pragma once

// Reference computations used by the tests. They are written independently
// of the library algorithms they check: direct summation, exact rational
// arithmetic, brute-force enumeration and 3x3 tile replication.

#include <streetperc/delaunay.hpp>
#include <streetperc/graph.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

namespace oracle {

using streetperc::Point2;

/// P(J >= k), J ~ Poisson(mean), as 1 - sum_{j<k} pmf(j) with the pmf built
/// by the recursion p_j = p_{j-1} * mean / j in long double.
inline double poisson_tail(std::uint64_t k, double mean) {
    long double p = std::exp(-static_cast<long double>(mean));
    long double below = 0.0L;
    for (std::uint64_t j = 0; j < k; ++j) {
        below += p;
        p *= static_cast<long double>(mean) / static_cast<long double>(j + 1);
    }
    return static_cast<double>(1.0L - below);
}

/// Upper tail by summing the pmf from k on for `terms` terms.
inline double poisson_tail_forward(std::uint64_t k, double mean, int terms) {
    long double log_p = static_cast<long double>(k) * std::log(static_cast<long double>(mean)) - mean -
                        std::lgamma(static_cast<long double>(k) + 1.0L);
    long double p = std::exp(log_p), sum = 0.0L;
    for (int t = 0; t < terms; ++t) {
        sum += p;
        p *= static_cast<long double>(mean) / static_cast<long double>(k + static_cast<std::uint64_t>(t) + 1);
    }
    return static_cast<double>(sum);
}

using Rational = boost::multiprecision::cpp_rational;

/// Sign of the in-circle determinant in exact arithmetic: +1 if d lies
/// strictly inside the circle through the counter-clockwise a, b, c.
inline int exact_incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
    const Rational adx = Rational(a.x) - d.x, ady = Rational(a.y) - d.y;
    const Rational bdx = Rational(b.x) - d.x, bdy = Rational(b.y) - d.y;
    const Rational cdx = Rational(c.x) - d.x, cdy = Rational(c.y) - d.y;
    const Rational det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) -
                         (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady) +
                         (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

inline int exact_orient(Point2 a, Point2 b, Point2 c) {
    const Rational det = (Rational(b.x) - a.x) * (Rational(c.y) - a.y) - (Rational(b.y) - a.y) * (Rational(c.x) - a.x);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

/// Number of (seed, triangle) pairs with the seed strictly inside the
/// triangle's circumcircle; zero for a Delaunay triangulation.
inline std::size_t circumcircle_violations(const std::vector<Point2>& seeds,
                                           const std::vector<std::array<int, 3>>& triangles) {
    std::size_t bad = 0;
    for (const auto& t : triangles)
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            if (static_cast<int>(s) == t[0] || static_cast<int>(s) == t[1] || static_cast<int>(s) == t[2]) continue;
            if (exact_incircle(seeds[t[0]], seeds[t[1]], seeds[t[2]], seeds[s]) > 0) ++bad;
        }
    return bad;
}

struct Flags {
    bool horizontal = false;
    bool vertical = false;
    bool operator==(const Flags&) const = default;
};

/// Wrap flags per device by replication: all devices are copied into a 3x3
/// tile of windows, the planar Gilbert graph (strict radius) is built by
/// brute force, and a device's component wraps along an axis when it holds
/// two copies of one device whose tile offsets differ along that axis.
inline std::vector<Flags> replication_wrap_flags(const std::vector<Point2>& pts, double r, double L) {
    const std::size_t n = pts.size();
    struct Copy {
        Point2 p;
        std::size_t device;
        int sx, sy;
    };
    std::vector<Copy> copies;
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy)
            for (std::size_t i = 0; i < n; ++i) copies.push_back({{pts[i].x + sx * L, pts[i].y + sy * L}, i, sx, sy});
    const std::size_t m = copies.size();
    std::vector<std::size_t> comp(m, SIZE_MAX);
    std::size_t ncomp = 0;
    for (std::size_t s = 0; s < m; ++s) {
        if (comp[s] != SIZE_MAX) continue;
        std::queue<std::size_t> q;
        q.push(s);
        comp[s] = ncomp;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v = 0; v < m; ++v) {
                if (comp[v] != SIZE_MAX) continue;
                const double dx = copies[u].p.x - copies[v].p.x, dy = copies[u].p.y - copies[v].p.y;
                if (dx * dx + dy * dy < r * r) {
                    comp[v] = ncomp;
                    q.push(v);
                }
            }
        }
        ++ncomp;
    }
    std::vector<Flags> comp_flags(ncomp);
    for (std::size_t c = 0; c < m; ++c) {
        auto& f = comp_flags[comp[c]];
        for (std::size_t d = 0; d < c; ++d) {
            if (comp[d] != comp[c] || copies[d].device != copies[c].device) continue;
            if (copies[d].sx != copies[c].sx) f.horizontal = true;
            if (copies[d].sy != copies[c].sy) f.vertical = true;
        }
    }
    std::vector<Flags> out(n);
    for (std::size_t c = 0; c < m; ++c)
        if (copies[c].sx == 0 && copies[c].sy == 0) out[copies[c].device] = comp_flags[comp[c]];
    return out;
}

/// Component label per device from breadth-first search over adjacency lists.
inline std::vector<int> bfs_components(const streetperc::GilbertGraph& g) {
    std::vector<int> label(g.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (label[s] >= 0) continue;
        std::queue<int> q;
        q.push(static_cast<int>(s));
        label[s] = next;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const auto& nb : g.neighbors(u))
                if (label[static_cast<std::size_t>(nb.id)] < 0) {
                    label[static_cast<std::size_t>(nb.id)] = next;
                    q.push(nb.id);
                }
        }
        ++next;
    }
    return label;
}

/// Pairwise torus distance without the library: minimum over nine images.
inline double torus_distance(Point2 a, Point2 b, double L) {
    double best = INFINITY;
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) best = std::min(best, std::hypot(b.x + sx * L - a.x, b.y + sy * L - a.y));
    return best;
}

} // namespace oracle
