#pragma once

#include <streetperc/delaunay.hpp>
#include <streetperc/error.hpp>
#include <streetperc/geometry.hpp>
#include <streetperc/predicates.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace streetperc {

enum class TessellationKind { PVT, PDT };

inline std::string_view to_string(TessellationKind k) { return k == TessellationKind::PVT ? "PVT" : "PDT"; }

inline TessellationKind parse_kind(std::string_view s) {
    if (s == "PVT" || s == "pvt") return TessellationKind::PVT;
    if (s == "PDT" || s == "pdt") return TessellationKind::PDT;
    throw InvalidParameter("unknown tessellation kind '" + std::string(s) + "' (expected PVT or PDT)");
}

/// Street segment; length is cached.
struct Segment {
    Point2 a;
    Point2 b;
    double length = 0.0;

    Segment() = default;
    Segment(Point2 a_, Point2 b_) : a(a_), b(b_), length(distance(a_, b_)) {}

    Point2 at(double t) const { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
};

/// Clips a segment to the closed square [0,L]^2 (Liang-Barsky). Returns
/// nothing when no part of positive length remains.
inline std::optional<Segment> clip_to_window(Point2 a, Point2 b, double L) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x, L - a.x, a.y, L - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return std::nullopt;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0)
            t0 = std::max(t0, r);
        else
            t1 = std::min(t1, r);
        if (t0 > t1) return std::nullopt;
    }
    auto clamp = [L](Point2 p) { return Point2{std::clamp(p.x, 0.0, L), std::clamp(p.y, 0.0, L)}; };
    const Point2 ca = clamp(t0 == 0.0 ? a : Point2{a.x + t0 * dx, a.y + t0 * dy});
    const Point2 cb = clamp(t1 == 1.0 ? b : Point2{a.x + t1 * dx, a.y + t1 * dy});
    Segment s(ca, cb);
    if (!(s.length > 0.0)) return std::nullopt;
    return s;
}

/// A street system realised on the torus window: segments clipped to the
/// window, with their total length nu1 cached at construction.
class Tessellation {
public:
    Tessellation(TessellationKind kind, TorusWindow window, std::vector<Segment> segments)
        : kind_(kind), window_(window), segments_(std::move(segments)) {
        for (const Segment& s : segments_) nu1_ += s.length;
    }

    TessellationKind kind() const { return kind_; }
    const TorusWindow& window() const { return window_; }
    const std::vector<Segment>& segments() const { return segments_; }
    double nu1() const { return nu1_; }

private:
    TessellationKind kind_;
    TorusWindow window_;
    std::vector<Segment> segments_;
    double nu1_ = 0.0;
};

/// Total street length inside the window.
inline double total_length(const Tessellation& t) { return t.nu1(); }

/// Planar seed intensity whose PVT/PDT has the given length intensity:
/// a PVT of intensity rho has gamma = 2 sqrt(rho), a PDT has
/// gamma = 32 sqrt(rho) / (3 pi).
inline double seed_intensity_for_gamma(double gamma, TessellationKind kind) {
    if (!(gamma > 0.0)) throw InvalidParameter("length intensity gamma must be positive");
    if (kind == TessellationKind::PVT) return (gamma / 2.0) * (gamma / 2.0);
    const double s = 3.0 * std::numbers::pi * gamma / 32.0;
    return s * s;
}

namespace detail {

inline void push_clipped(std::vector<Segment>& out, Point2 a, Point2 b, double L) {
    if (auto s = clip_to_window(a, b, L)) out.push_back(*s);
}

struct CollinearSeeds {
    std::vector<Point2> sorted; // distinct, ordered along the line
};

// Distinct seeds ordered along their common line, if all are collinear.
inline std::optional<CollinearSeeds> collinear_seeds(const std::vector<Point2>& seeds) {
    const Point2 p0 = seeds.front();
    auto p1 = std::find_if(seeds.begin(), seeds.end(), [p0](Point2 p) { return !(p == p0); });
    if (p1 == seeds.end()) return std::nullopt;
    for (const Point2& p : seeds)
        if (predicates::orient(p0, *p1, p) != 0) return std::nullopt;
    std::vector<Point2> pts(seeds);
    std::sort(pts.begin(), pts.end(), [](Point2 p, Point2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return CollinearSeeds{std::move(pts)};
}

inline void require_seeds(const std::vector<Point2>& seeds) {
    if (seeds.size() < 2) throw DegenerateInput("a street system needs at least 2 seeds");
}

} // namespace detail

/// Delaunay edges of the (already band-replicated) seeds, clipped to the
/// window. Each torus edge is counted once because only the in-window part
/// of each planar edge is kept.
inline Tessellation build_pdt(const std::vector<Point2>& seeds, const TorusWindow& window) {
    detail::require_seeds(seeds);
    const double L = window.side();
    std::vector<Segment> segs;
    if (auto line = detail::collinear_seeds(seeds)) {
        for (std::size_t k = 1; k < line->sorted.size(); ++k)
            detail::push_clipped(segs, line->sorted[k - 1], line->sorted[k], L);
        return Tessellation(TessellationKind::PDT, window, std::move(segs));
    }
    const DelaunayTriangulation dt = delaunay_triangulate(seeds);
    for (std::size_t t = 0; t < dt.triangles.size(); ++t) {
        const auto& tri = dt.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int nb = dt.neighbors[t][i];
            // Each interior edge is shared by two triangles; emit it once.
            if (nb >= 0 && nb < static_cast<int>(t)) continue;
            detail::push_clipped(segs, seeds[tri[(i + 1) % 3]], seeds[tri[(i + 2) % 3]], L);
        }
    }
    return Tessellation(TessellationKind::PDT, window, std::move(segs));
}

/// Voronoi cell boundaries of the (already band-replicated) seeds: the
/// circumcentres of adjacent Delaunay triangles joined, clipped to the window.
/// Unbounded Voronoi edges on the hull of the replicated set are dropped; a
/// band of a few cell diameters keeps them outside the window.
inline Tessellation build_pvt(const std::vector<Point2>& seeds, const TorusWindow& window) {
    detail::require_seeds(seeds);
    const double L = window.side();
    std::vector<Segment> segs;
    if (auto line = detail::collinear_seeds(seeds)) {
        // Parallel bisector lines between consecutive seeds.
        const auto& s = line->sorted;
        double extent = L;
        for (const Point2& p : s) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
        for (std::size_t k = 1; k < s.size(); ++k) {
            const Point2 m = 0.5 * (s[k - 1] + s[k]);
            const Point2 d = s[k] - s[k - 1];
            const double len = norm(d);
            const Point2 perp{-d.y / len, d.x / len};
            const double reach = 4.0 * extent;
            detail::push_clipped(segs, m - reach * perp, m + reach * perp, L);
        }
        return Tessellation(TessellationKind::PVT, window, std::move(segs));
    }
    const DelaunayTriangulation dt = delaunay_triangulate(seeds);
    std::vector<Point2> centers(dt.triangles.size());
    for (std::size_t t = 0; t < dt.triangles.size(); ++t) {
        const auto& tri = dt.triangles[t];
        centers[t] = predicates::circumcenter(seeds[tri[0]], seeds[tri[1]], seeds[tri[2]]);
    }
    for (std::size_t t = 0; t < dt.triangles.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            const int nb = dt.neighbors[t][i];
            if (nb < static_cast<int>(t)) continue; // hull (-1) or already emitted
            detail::push_clipped(segs, centers[t], centers[nb], L);
        }
    }
    return Tessellation(TessellationKind::PVT, window, std::move(segs));
}

inline Tessellation build_tessellation(TessellationKind kind, const std::vector<Point2>& seeds,
                                       const TorusWindow& window) {
    return kind == TessellationKind::PVT ? build_pvt(seeds, window) : build_pdt(seeds, window);
}

/// Samples a stationary street system with length intensity gamma on the
/// torus window of the given side: Poisson seeds, band replication, tracing.
inline Tessellation sample_street_system(TessellationKind kind, double gamma, double side, RngState rng,
                                         std::optional<double> band = std::nullopt) {
    const double rho = seed_intensity_for_gamma(gamma, kind);
    const TorusWindow window(side, band.value_or(default_band(rho, side)));
    const std::vector<Point2> seeds = sample_poisson_points(rho, window, rng);
    if (seeds.size() < 2) return Tessellation(kind, window, {});
    return build_tessellation(kind, replicate_band(seeds, window), window);
}

} // namespace streetperc
