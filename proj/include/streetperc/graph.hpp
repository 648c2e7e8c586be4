#pragma once

#include <streetperc/cox.hpp>
#include <streetperc/error.hpp>
#include <streetperc/geometry.hpp>
#include <streetperc/union_find.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace streetperc {

namespace detail {
inline void require_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("connection radius r must be positive");
}
} // namespace detail

/// Uniform bucket grid over the torus with cells no smaller than r, so all
/// neighbours within r of a point lie in its 3x3 block of cells.
class SpatialGrid {
public:
    SpatialGrid(const TorusWindow& window, double r) : L_(window.side()) {
        detail::require_radius(r);
        const double per_axis = std::floor(L_ / r);
        n_ = static_cast<int>(std::clamp(per_axis, 1.0, 2048.0));
        cell_ = L_ / n_;
        buckets_.resize(static_cast<std::size_t>(n_) * n_);
    }

    int cells_per_axis() const { return n_; }
    double cell_size() const { return cell_; }

    void insert(int id, Point2 p) { buckets_[cell_of(p)].push_back(id); }

    /// Calls f(id) for every stored id in the 3x3 periodic block around p.
    template <class F>
    void for_each_near(Point2 p, F&& f) const {
        const int cx = axis_cell(p.x), cy = axis_cell(p.y);
        int xs[3], ys[3];
        const int nx = block(cx, xs), ny = block(cy, ys);
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b)
                for (int id : buckets_[static_cast<std::size_t>(ys[b]) * n_ + xs[a]]) f(id);
    }

private:
    double L_;
    int n_ = 1;
    double cell_ = 1.0;
    std::vector<std::vector<int>> buckets_;

    int axis_cell(double c) const { return std::clamp(static_cast<int>(c / cell_), 0, n_ - 1); }
    std::size_t cell_of(Point2 p) const {
        return static_cast<std::size_t>(axis_cell(p.y)) * n_ + axis_cell(p.x);
    }
    // Distinct cells among c-1, c, c+1 (mod n).
    int block(int c, int* out) const {
        if (n_ < 3) {
            for (int k = 0; k < n_; ++k) out[k] = k;
            return n_;
        }
        out[0] = (c + n_ - 1) % n_;
        out[1] = c;
        out[2] = (c + 1) % n_;
        return 3;
    }
};

/// Calls f(shift) for every periodic image q + shift*L of q (shift in
/// {-1,0,1}^2) lying strictly within r of p. When r <= L/2 at most one image
/// qualifies, the nearest one.
template <class F>
void for_each_image_within(Point2 p, Point2 q, double r, const TorusWindow& window, F&& f) {
    const double L = window.side();
    const double r2 = r * r;
    if (r <= L / 2.0) {
        const Winding w = window.nearest_image(p, q);
        const Point2 d = window.translate(q, w) - p;
        if (d.x * d.x + d.y * d.y < r2) f(w);
        return;
    }
    for (int sx = -1; sx <= 1; ++sx)
        for (int sy = -1; sy <= 1; ++sy) {
            const Point2 d = window.translate(q, {sx, sy}) - p;
            if (d.x * d.x + d.y * d.y < r2) f(Winding{sx, sy});
        }
}

/// Periodic link between devices: the copy of `to` shifted by `shift`
/// periods lies within r of `from`. Self-links (from == to, nonzero shift)
/// occur only when r exceeds the window side.
struct ImageLink {
    int from;
    int to;
    Winding shift;
};

/// Gilbert graph on the torus: i ~ j iff torus_distance(i, j) < r.
class GilbertGraph {
public:
    struct Neighbor {
        int id;
        Winding shift; // shift of the nearest image of `id`
    };

    GilbertGraph(std::vector<Point2> positions, double r, TorusWindow window)
        : positions_(std::move(positions)), r_(r), window_(window), adjacency_(positions_.size()) {}

    std::size_t size() const { return positions_.size(); }
    double radius() const { return r_; }
    const TorusWindow& window() const { return window_; }
    const std::vector<Point2>& positions() const { return positions_; }
    const std::vector<Neighbor>& neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
    const std::vector<ImageLink>& links() const { return links_; }

    std::size_t edge_count() const {
        std::size_t m = 0;
        for (const auto& a : adjacency_) m += a.size();
        return m / 2;
    }

    // Used by the builders.
    void add_edge(int i, int j, Winding shift_of_j) {
        adjacency_[static_cast<std::size_t>(i)].push_back({j, shift_of_j});
        adjacency_[static_cast<std::size_t>(j)].push_back({i, Winding{} - shift_of_j});
    }
    void add_link(ImageLink l) { links_.push_back(l); }

private:
    std::vector<Point2> positions_;
    double r_;
    TorusWindow window_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<ImageLink> links_;
};

/// Gilbert graph of a device set under the torus metric, built through a
/// SpatialGrid in expected linear time.
inline GilbertGraph build_gilbert(const std::vector<Point2>& positions, double r, const TorusWindow& window) {
    detail::require_radius(r);
    GilbertGraph g(positions, r, window);
    SpatialGrid grid(window, r);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const int id = static_cast<int>(i);
        const Point2 p = positions[i];
        // Self-images only matter for r > L.
        for_each_image_within(p, p, r, window, [&](Winding w) {
            if (!w.is_zero() && (w.x > 0 || (w.x == 0 && w.y > 0))) g.add_link({id, id, w});
        });
        grid.for_each_near(p, [&](int j) {
            bool nearest_added = false;
            for_each_image_within(p, positions[static_cast<std::size_t>(j)], r, window, [&](Winding w) {
                g.add_link({id, j, w});
                if (!nearest_added) {
                    const Winding nearest = window.nearest_image(p, positions[static_cast<std::size_t>(j)]);
                    g.add_edge(id, j, nearest);
                    nearest_added = true;
                }
            });
        });
        grid.insert(id, p);
    }
    return g;
}

inline GilbertGraph build_gilbert(const DeviceSet& devices, double r, const TorusWindow& window) {
    return build_gilbert(devices.positions, r, window);
}

/// Wrap-aware union-find over all periodic links of a graph.
inline WrapUnionFind wrap_components(const GilbertGraph& g) {
    WrapUnionFind uf(g.size());
    for (const ImageLink& l : g.links()) uf.unite(l.from, l.to, l.shift);
    return uf;
}

/// Devices whose component wraps around the torus in either axis: the finite
/// window's stand-in for the infinite cluster. When several components wrap,
/// all of their devices are returned.
inline std::vector<int> largest_wrapping_component(const GilbertGraph& g, WrapUnionFind& uf) {
    std::vector<int> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (uf.flags(static_cast<int>(i)).any()) out.push_back(static_cast<int>(i));
    return out;
}

inline std::vector<int> largest_wrapping_component(const GilbertGraph& g) {
    WrapUnionFind uf = wrap_components(g);
    return largest_wrapping_component(g, uf);
}

/// Gilbert graph grown one device at a time, maintaining wrap-aware
/// connected components.
class IncrementalGilbert {
public:
    IncrementalGilbert(const TorusWindow& window, double r, bool keep_edges = false)
        : window_(window), r_(r), grid_(window, r), keep_edges_(keep_edges) {
        detail::require_radius(r);
    }

    struct Inserted {
        int id;
        WrapFlags component; // wrap flags of the new device's component
    };

    Inserted insert_device(Point2 p) {
        const int id = uf_.add();
        positions_.push_back(p);
        WrapFlags flags{};
        for_each_image_within(p, p, r_, window_, [&](Winding w) {
            if (!w.is_zero()) flags |= record(id, id, w);
        });
        grid_.for_each_near(p, [&](int j) {
            bool nearest_added = false;
            for_each_image_within(p, positions_[static_cast<std::size_t>(j)], r_, window_, [&](Winding w) {
                flags |= record(id, j, w);
                if (keep_edges_ && !nearest_added) {
                    edges_.push_back({id, j, window_.nearest_image(p, positions_[static_cast<std::size_t>(j)])});
                    nearest_added = true;
                }
            });
        });
        grid_.insert(id, p);
        return {id, uf_.flags(id)};
    }

    std::size_t size() const { return positions_.size(); }
    bool any_wrapped() const { return any_wrapped_; }
    WrapFlags flags(int i) { return uf_.flags(i); }
    WrapUnionFind& union_find() { return uf_; }
    const std::vector<Point2>& positions() const { return positions_; }

    /// Snapshot as an immutable graph (requires keep_edges).
    GilbertGraph to_graph() const {
        if (!keep_edges_) throw InvalidState("incremental graph was built without edge storage");
        GilbertGraph g(positions_, r_, window_);
        for (const ImageLink& e : edges_) g.add_edge(e.from, e.to, e.shift);
        for (const ImageLink& l : links_) g.add_link(l);
        return g;
    }

private:
    TorusWindow window_;
    double r_;
    SpatialGrid grid_;
    WrapUnionFind uf_;
    std::vector<Point2> positions_;
    bool keep_edges_;
    bool any_wrapped_ = false;
    std::vector<ImageLink> edges_;
    std::vector<ImageLink> links_;

    WrapFlags record(int i, int j, Winding w) {
        if (keep_edges_) links_.push_back({i, j, w});
        const WrapFlags f = uf_.unite(i, j, w);
        if (f.any()) any_wrapped_ = true;
        return f;
    }
};

// Hop counts --------------------------------------------------------------

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Hop counts from a set of sources: rows[s][y] = S(sources[s], y).
struct HopTable {
    std::vector<int> sources;
    std::vector<std::vector<int>> rows;
};

/// Breadth-first hop counts from `source`; `edge_ok(i, neighbor)` filters edges.
template <class EdgeFilter>
std::vector<int> bfs_hops(const GilbertGraph& g, int source, EdgeFilter&& edge_ok) {
    std::vector<int> dist(g.size(), kUnreachable);
    std::vector<int> queue;
    queue.reserve(g.size());
    dist[static_cast<std::size_t>(source)] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        const int du = dist[static_cast<std::size_t>(u)];
        for (const GilbertGraph::Neighbor& nb : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(nb.id)] != kUnreachable || !edge_ok(u, nb)) continue;
            dist[static_cast<std::size_t>(nb.id)] = du + 1;
            queue.push_back(nb.id);
        }
    }
    return dist;
}

inline std::vector<int> bfs_hops(const GilbertGraph& g, int source) {
    return bfs_hops(g, source, [](int, const GilbertGraph::Neighbor&) { return true; });
}

/// Unweighted graph distances from each source (breadth-first search).
inline HopTable hop_distances(const GilbertGraph& g, const std::vector<int>& sources) {
    HopTable t;
    t.sources = sources;
    t.rows.reserve(sources.size());
    for (int s : sources) t.rows.push_back(bfs_hops(g, s));
    return t;
}

/// All-pairs hop counts by Floyd-Warshall; O(n^3), kept as a reference.
inline std::vector<std::vector<int>> floyd_warshall(const GilbertGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kUnreachable));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (const auto& nb : g.neighbors(static_cast<int>(i))) d[i][static_cast<std::size_t>(nb.id)] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kUnreachable) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (d[k][j] == kUnreachable) continue;
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
            }
        }
    return d;
}

} // namespace streetperc
