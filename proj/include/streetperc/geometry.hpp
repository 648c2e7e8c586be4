#pragma once

#include <streetperc/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace streetperc {

/// A point in the plane; coordinates in km.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline double norm(Point2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Integer number of window periods per axis.
struct Winding {
    int x = 0;
    int y = 0;

    friend constexpr Winding operator+(Winding a, Winding b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Winding operator-(Winding a, Winding b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr bool operator==(Winding a, Winding b) = default;
    constexpr bool is_zero() const { return x == 0 && y == 0; }
};

/// Square window [0, side)^2 with periodic identification of opposite sides.
/// `band` is the width of the strip that is replicated across each side
/// before a tessellation is traced.
class TorusWindow {
public:
    TorusWindow(double side, double band = 0.0) : side_(side), band_(band) {
        if (!(side > 0.0) || !std::isfinite(side))
            throw InvalidParameter("window side must be positive and finite");
        if (!(band >= 0.0) || !(band < side / 2.0))
            throw InvalidParameter("replication band must satisfy 0 <= band < side/2");
    }

    double side() const { return side_; }
    double band() const { return band_; }
    double area() const { return side_ * side_; }

    /// Reduces a coordinate into [0, side).
    double wrap(double c) const {
        double w = std::fmod(c, side_);
        if (w < 0.0) w += side_;
        if (w >= side_) w = 0.0;
        return w;
    }
    Point2 wrap(Point2 p) const { return {wrap(p.x), wrap(p.y)}; }

    Point2 translate(Point2 p, Winding w) const {
        return {p.x + w.x * side_, p.y + w.y * side_};
    }

    bool contains(Point2 p) const {
        return p.x >= 0.0 && p.x < side_ && p.y >= 0.0 && p.y < side_;
    }

    /// Periodic image of `b` closest to `a`: returns the shift w such that
    /// b + w*side is nearest to a.
    Winding nearest_image(Point2 a, Point2 b) const {
        auto axis = [this](double d) {
            if (d > side_ / 2.0) return -1;
            if (d < -side_ / 2.0) return 1;
            return 0;
        };
        return {axis(b.x - a.x), axis(b.y - a.y)};
    }

private:
    double side_;
    double band_;
};

/// Minimum over the nine periodic images of the Euclidean distance.
inline double torus_distance(Point2 a, Point2 b, const TorusWindow& window) {
    const double L = window.side();
    double dx = std::abs(b.x - a.x);
    double dy = std::abs(b.y - a.y);
    dx = std::min(dx, std::abs(L - dx));
    dy = std::min(dy, std::abs(L - dy));
    return std::hypot(dx, dy);
}

// Seeded random streams -----------------------------------------------------

namespace detail {
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

using Engine = std::mt19937_64;

/// Identifies one independent random stream. Child streams are derived by
/// hashing, so a run keyed by (k, i) sees the same numbers regardless of
/// which worker executes it or in what order.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngState child(std::uint64_t key) const {
        return {seed, detail::splitmix64(stream ^ detail::splitmix64(key + 0x632be59bd9b4e019ULL))};
    }
    RngState child(std::uint64_t k, std::uint64_t i) const { return child(k).child(i); }

    Engine engine() const {
        const std::uint64_t a = detail::splitmix64(seed);
        const std::uint64_t b = detail::splitmix64(stream ^ 0xd1b54a32d192ed03ULL);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        return Engine(seq);
    }
};

inline double uniform01(Engine& eng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

/// Draws J ~ Poisson(mean).
inline std::uint64_t sample_poisson_count(double mean, Engine& eng) {
    if (mean < 0.0 || !std::isfinite(mean)) throw InvalidParameter("Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(eng);
}

/// Homogeneous Poisson process of the given intensity (per km^2) on [0,L)^2.
inline std::vector<Point2> sample_poisson_points(double intensity, const TorusWindow& window, RngState rng) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw InvalidParameter("point intensity must be finite and >= 0");
    Engine eng = rng.engine();
    const auto count = sample_poisson_count(intensity * window.area(), eng);
    std::vector<Point2> pts;
    pts.reserve(count);
    const double L = window.side();
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = window.wrap(L * uniform01(eng));
        const double y = window.wrap(L * uniform01(eng));
        pts.push_back({x, y});
    }
    return pts;
}

/// Appends periodic copies of every point lying within `band` of a side or
/// corner, so that the result covers [-band, L+band)^2 periodically.
inline std::vector<Point2> replicate_band(const std::vector<Point2>& points, const TorusWindow& window) {
    const double L = window.side();
    const double band = window.band();
    std::vector<Point2> out(points);
    if (band <= 0.0) return out;
    auto shifts = [&](double c, std::array<int, 2>& s) {
        int n = 0;
        if (c < band) s[n++] = 1;
        if (c >= L - band) s[n++] = -1;
        return n;
    };
    for (const Point2& p : points) {
        std::array<int, 2> sx{}, sy{};
        const int nx = shifts(p.x, sx);
        const int ny = shifts(p.y, sy);
        for (int a = 0; a < nx; ++a) out.push_back(window.translate(p, {sx[a], 0}));
        for (int b = 0; b < ny; ++b) out.push_back(window.translate(p, {0, sy[b]}));
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) out.push_back(window.translate(p, {sx[a], sy[b]}));
    }
    return out;
}

/// Default band width: about three typical cell diameters of the seed process.
inline double default_band(double seed_intensity, double side) {
    const double band = 3.0 / std::sqrt(seed_intensity);
    return std::min(band, 0.49 * side);
}

} // namespace streetperc
