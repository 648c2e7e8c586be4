#pragma once

#include <streetperc/error.hpp>
#include <streetperc/geometry.hpp>
#include <streetperc/predicates.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

namespace streetperc {

/// Delaunay triangulation of a point set. Triangles are counter-clockwise
/// index triples into the input; neighbors[t][i] is the triangle across the
/// edge opposite triangles[t][i], or -1 on the convex hull.
struct DelaunayTriangulation {
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 3>> neighbors;
};

namespace detail {

// Position along a Hilbert curve on a 2^16 x 2^16 grid.
inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
    constexpr std::uint32_t n = 1u << 16;
    std::uint64_t d = 0;
    for (std::uint32_t s = n / 2; s > 0; s /= 2) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

inline std::vector<int> hilbert_order(const std::vector<Point2>& pts) {
    double minx = pts[0].x, maxx = pts[0].x, miny = pts[0].y, maxy = pts[0].y;
    for (const Point2& p : pts) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double span = std::max({maxx - minx, maxy - miny, 1e-300});
    const double scale = 65535.0 / span;
    std::vector<std::uint64_t> key(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto gx = static_cast<std::uint32_t>((pts[i].x - minx) * scale);
        const auto gy = static_cast<std::uint32_t>((pts[i].y - miny) * scale);
        key[i] = hilbert_index(gx, gy);
    }
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
    return order;
}

// Incremental Bowyer-Watson with ghost triangles: every convex-hull edge
// (a, b) carries a ghost triangle (a, b, kGhost) whose "circumdisk" is the
// open half-plane beyond the edge plus the open edge itself. Combined with
// exact predicates this needs no bounding super-triangle. Cocircular points
// never invalidate an existing triangle (strict in-circle test), so the
// diagonal of a cocircular quadrilateral is the one present when its last
// vertex is inserted.
class BowyerWatson {
public:
    static constexpr int kGhost = -1;

    explicit BowyerWatson(const std::vector<Point2>& pts) : pts_(pts) {}

    DelaunayTriangulation run() {
        const int n = static_cast<int>(pts_.size());
        if (n < 3) throw DegenerateInput("Delaunay triangulation needs at least 3 points");
        const std::vector<int> order = hilbert_order(pts_);

        const int i0 = order[0];
        int i1 = -1, i2 = -1;
        for (int k = 1; k < n && i1 < 0; ++k)
            if (!(pts_[order[k]] == pts_[i0])) i1 = order[k];
        if (i1 < 0) throw DegenerateInput("all points coincide");
        for (int k = 1; k < n && i2 < 0; ++k)
            if (predicates::orient(pts_[i0], pts_[i1], pts_[order[k]]) != 0) i2 = order[k];
        if (i2 < 0) throw DegenerateInput("all points are collinear");

        start(i0, i1, i2);
        start_of_.assign(static_cast<std::size_t>(n) + 1, -1);
        end_of_.assign(static_cast<std::size_t>(n) + 1, -1);
        for (int k = 0; k < n; ++k) {
            const int v = order[k];
            if (v == i0 || v == i1 || v == i2) continue;
            insert(v);
        }
        return collect();
    }

private:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> n;
        bool alive = true;
        bool ghost() const { return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost; }
    };

    const std::vector<Point2>& pts_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<char> in_cavity_;
    std::vector<int> cavity_;
    std::vector<int> start_of_;
    std::vector<int> end_of_;
    int last_ = 0;
    std::uint32_t walk_rot_ = 0;

    int make(std::array<int, 3> v) {
        Tri t{v, {-1, -1, -1}, true};
        if (!free_.empty()) {
            const int id = free_.back();
            free_.pop_back();
            tris_[id] = t;
            in_cavity_[id] = 0;
            return id;
        }
        tris_.push_back(t);
        in_cavity_.push_back(0);
        return static_cast<int>(tris_.size()) - 1;
    }

    void start(int a, int b, int c) {
        if (predicates::orient(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
        const int t0 = make({a, b, c});
        const int g0 = make({c, b, kGhost}); // across (b, c)
        const int g1 = make({a, c, kGhost}); // across (c, a)
        const int g2 = make({b, a, kGhost}); // across (a, b)
        const std::array<int, 4> ids{t0, g0, g1, g2};
        // Pair up every directed edge with its reverse.
        for (int s : ids)
            for (int i = 0; i < 3; ++i) {
                const int u = tris_[s].v[(i + 1) % 3], w = tris_[s].v[(i + 2) % 3];
                for (int o : ids) {
                    if (o == s) continue;
                    for (int j = 0; j < 3; ++j)
                        if (tris_[o].v[(j + 1) % 3] == w && tris_[o].v[(j + 2) % 3] == u) tris_[s].n[i] = o;
                }
            }
        last_ = t0;
    }

    bool in_disk(const Tri& t, Point2 p) const {
        int g = -1;
        for (int i = 0; i < 3; ++i)
            if (t.v[i] == kGhost) g = i;
        if (g < 0) return predicates::incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) > 0;
        const Point2 a = pts_[t.v[(g + 1) % 3]];
        const Point2 b = pts_[t.v[(g + 2) % 3]];
        const int o = predicates::orient(a, b, p);
        if (o != 0) return o > 0;
        // On the hull line: inside the open edge only.
        const Point2 ab = b - a, ap = p - a, bp = p - b;
        return ab.x * ap.x + ab.y * ap.y > 0.0 && ab.x * bp.x + ab.y * bp.y < 0.0;
    }

    int locate(Point2 p) {
        int t = last_;
        if (tris_[t].ghost()) {
            for (int i = 0; i < 3; ++i)
                if (tris_[t].v[i] == kGhost) t = tris_[t].n[i];
        }
        for (;;) {
            const Tri& tri = tris_[t];
            int next = -1;
            const std::uint32_t rot = walk_rot_++ % 3;
            for (std::uint32_t k = 0; k < 3; ++k) {
                const int i = static_cast<int>((k + rot) % 3);
                const Point2 a = pts_[tri.v[(i + 1) % 3]];
                const Point2 b = pts_[tri.v[(i + 2) % 3]];
                if (predicates::orient(a, b, p) < 0) {
                    next = tri.n[i];
                    break;
                }
            }
            if (next < 0) return t;
            if (tris_[next].ghost()) return next;
            t = next;
        }
    }

    void insert(int vi) {
        const Point2 p = pts_[vi];
        const int t0 = locate(p);
        for (int v : tris_[t0].v)
            if (v != kGhost && pts_[v] == p) return; // duplicate

        cavity_.clear();
        cavity_.push_back(t0);
        in_cavity_[t0] = 1;
        for (std::size_t k = 0; k < cavity_.size(); ++k) {
            const Tri& t = tris_[cavity_[k]];
            for (int nb : t.n) {
                if (in_cavity_[nb]) continue;
                if (in_disk(tris_[nb], p)) {
                    in_cavity_[nb] = 1;
                    cavity_.push_back(nb);
                }
            }
        }

        struct Boundary {
            int u, w, outside;
        };
        std::vector<Boundary> boundary;
        for (int c : cavity_) {
            const Tri& t = tris_[c];
            for (int i = 0; i < 3; ++i)
                if (!in_cavity_[t.n[i]]) boundary.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], t.n[i]});
        }
        for (int c : cavity_) {
            tris_[c].alive = false;
            in_cavity_[c] = 0;
            free_.push_back(c);
        }

        std::vector<int> created;
        created.reserve(boundary.size());
        for (const Boundary& e : boundary) {
            const int id = make({e.u, e.w, vi});
            tris_[id].n[2] = e.outside;
            Tri& out = tris_[e.outside];
            for (int j = 0; j < 3; ++j)
                if (out.v[(j + 1) % 3] == e.w && out.v[(j + 2) % 3] == e.u) out.n[j] = id;
            const auto su = static_cast<std::size_t>(e.u + 1);
            const auto sw = static_cast<std::size_t>(e.w + 1);
            start_of_[su] = id;
            end_of_[sw] = id;
            created.push_back(id);
        }
        for (int id : created) {
            Tri& t = tris_[id];
            t.n[0] = start_of_[static_cast<std::size_t>(t.v[1] + 1)]; // across (w, p)
            t.n[1] = end_of_[static_cast<std::size_t>(t.v[0] + 1)];   // across (p, u)
            if (!t.ghost()) last_ = id;
        }
    }

    DelaunayTriangulation collect() const {
        DelaunayTriangulation out;
        std::vector<int> remap(tris_.size(), -1);
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!tris_[t].alive || tris_[t].ghost()) continue;
            remap[t] = static_cast<int>(out.triangles.size());
            out.triangles.push_back(tris_[t].v);
        }
        out.neighbors.resize(out.triangles.size());
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (remap[t] < 0) continue;
            for (int i = 0; i < 3; ++i) out.neighbors[remap[t]][i] = remap[tris_[t].n[i]];
        }
        return out;
    }
};

} // namespace detail

/// Delaunay triangulation by incremental insertion in Hilbert-curve order.
/// Exact duplicate points are ignored (they appear in no triangle).
inline DelaunayTriangulation delaunay_triangulate(const std::vector<Point2>& seeds) {
    for (const Point2& p : seeds)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidParameter("non-finite seed coordinate");
    return detail::BowyerWatson(seeds).run();
}

} // namespace streetperc
