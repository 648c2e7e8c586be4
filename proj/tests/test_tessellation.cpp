#include <streetperc/tessellation.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace streetperc;

namespace {

std::vector<Point2> random_seeds(std::size_t n, double L, std::uint64_t seed) {
    Engine eng = RngState{seed, 0x5eed}.engine();
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {L * uniform01(eng), L * uniform01(eng)};
    return pts;
}

} // namespace

TEST(Predicates, FilteredAgreesWithExactNearDegeneracy) {
    Engine eng = RngState{1, 1}.engine();
    for (int t = 0; t < 2000; ++t) {
        const Point2 a{uniform01(eng), uniform01(eng)}, b{uniform01(eng), uniform01(eng)};
        const double u = uniform01(eng);
        // nearly collinear third point
        const Point2 c{a.x + u * (b.x - a.x) + 1e-17 * t, a.y + u * (b.y - a.y)};
        EXPECT_EQ(predicates::orient(a, b, c), oracle::exact_orient(a, b, c));
    }
    EXPECT_EQ(predicates::incircle({0, 0}, {1, 0}, {1, 1}, {0, 1}), 0);
    EXPECT_EQ(predicates::incircle({0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}), 1);
    EXPECT_EQ(predicates::incircle({0, 0}, {1, 0}, {0, 1}, {2, 2}), -1);
}

TEST(Delaunay, ThreePointsOneTriangle) {
    const auto dt = delaunay_triangulate({{0, 0}, {1, 0}, {0, 1}});
    ASSERT_EQ(dt.triangles.size(), 1u);
    const auto& t = dt.triangles[0];
    EXPECT_EQ(oracle::exact_orient({0, 0}, {1, 0}, {0, 1}) == 1 ? 1 : 0, 1);
    const std::vector<Point2> p{{0, 0}, {1, 0}, {0, 1}};
    EXPECT_EQ(oracle::exact_orient(p[t[0]], p[t[1]], p[t[2]]), 1);
    for (int nb : dt.neighbors[0]) EXPECT_EQ(nb, -1);
}

TEST(Delaunay, CocircularSquareTwoTriangles) {
    const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto dt = delaunay_triangulate(sq);
    ASSERT_EQ(dt.triangles.size(), 2u);
    // Tie-break: the first triangle built is kept, so the diagonal is deterministic.
    const auto again = delaunay_triangulate(sq);
    EXPECT_EQ(dt.triangles, again.triangles);
    std::set<int> shared;
    for (int v : dt.triangles[0])
        for (int w : dt.triangles[1])
            if (v == w) shared.insert(v);
    EXPECT_EQ(shared.size(), 2u);
    EXPECT_TRUE(shared == std::set<int>({0, 2}) || shared == std::set<int>({1, 3}));
}

TEST(Delaunay, EmptyCircumcircleBruteForce) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto seeds = random_seeds(100, 1.0, s);
        const auto dt = delaunay_triangulate(seeds);
        EXPECT_EQ(oracle::circumcircle_violations(seeds, dt.triangles), 0u) << "instance " << s;
        for (const auto& t : dt.triangles) EXPECT_EQ(oracle::exact_orient(seeds[t[0]], seeds[t[1]], seeds[t[2]]), 1);
        // Euler: a triangulation of n points with h hull vertices has 2n - 2 - h triangles.
        std::size_t hull_edges = 0;
        for (const auto& nb : dt.neighbors)
            for (int x : nb) hull_edges += x < 0;
        EXPECT_EQ(dt.triangles.size(), 2 * seeds.size() - 2 - hull_edges);
    }
}

TEST(Delaunay, IntegerLatticeDegeneracies) {
    std::vector<Point2> grid;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) grid.push_back({static_cast<double>(i), static_cast<double>(j)});
    const auto dt = delaunay_triangulate(grid);
    EXPECT_EQ(dt.triangles.size(), 2u * 7 * 7);
    EXPECT_EQ(oracle::circumcircle_violations(grid, dt.triangles), 0u);
}

TEST(Delaunay, NeighborsAreSymmetric) {
    const auto seeds = random_seeds(200, 3.0, 77);
    const auto dt = delaunay_triangulate(seeds);
    for (std::size_t t = 0; t < dt.triangles.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            const int nb = dt.neighbors[t][i];
            if (nb < 0) continue;
            const auto& back = dt.neighbors[static_cast<std::size_t>(nb)];
            EXPECT_NE(std::find(back.begin(), back.end(), static_cast<int>(t)), back.end());
        }
}

TEST(Delaunay, DegenerateInputs) {
    EXPECT_THROW(delaunay_triangulate({{0, 0}, {1, 1}}), DegenerateInput);
    EXPECT_THROW(delaunay_triangulate({{1, 1}, {1, 1}, {1, 1}}), DegenerateInput);
    EXPECT_THROW(delaunay_triangulate({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateInput);
    EXPECT_THROW(delaunay_triangulate({{0, 0}, {1, 0}, {0, NAN}}), InvalidParameter);
}

TEST(Delaunay, DuplicateSeedsAreIgnored) {
    const auto dt = delaunay_triangulate({{0, 0}, {1, 0}, {0, 1}, {1, 0}});
    EXPECT_EQ(dt.triangles.size(), 1u);
}

TEST(Voronoi, VerticesEquidistantFromDefiningSeeds) {
    const double L = 10.0;
    const auto seeds = random_seeds(100, L, 3);
    const auto dt = delaunay_triangulate(seeds);
    for (const auto& t : dt.triangles) {
        const Point2 c = predicates::circumcenter(seeds[t[0]], seeds[t[1]], seeds[t[2]]);
        const double d0 = distance(c, seeds[t[0]]);
        EXPECT_NEAR(distance(c, seeds[t[1]]), d0, 1e-9 * L);
        EXPECT_NEAR(distance(c, seeds[t[2]]), d0, 1e-9 * L);
    }
}

TEST(Voronoi, TwoSeedsGiveThePerpendicularBisector) {
    const auto t = build_pvt({{4, 5}, {6, 5}}, TorusWindow(100, 0.0));
    ASSERT_EQ(t.segments().size(), 1u);
    const Segment& s = t.segments()[0];
    EXPECT_NEAR(s.a.x, 5.0, 1e-12);
    EXPECT_NEAR(s.b.x, 5.0, 1e-12);
    EXPECT_NEAR(t.nu1(), 100.0, 1e-9);
}

TEST(Voronoi, DualityVertexCountEqualsTriangleCount) {
    const double L = 100.0;
    auto seeds = random_seeds(300, 60.0, 8);
    for (auto& p : seeds) p = p + Point2{20, 20};
    const auto dt = delaunay_triangulate(seeds);
    const auto pvt = build_pvt(seeds, TorusWindow(L, 0.0));
    std::size_t inside = 0;
    for (const auto& t : dt.triangles) {
        const Point2 c = predicates::circumcenter(seeds[t[0]], seeds[t[1]], seeds[t[2]]);
        inside += c.x > 0 && c.x < L && c.y > 0 && c.y < L;
    }
    std::vector<Point2> ends;
    for (const Segment& s : pvt.segments())
        for (Point2 p : {s.a, s.b})
            if (p.x > 0 && p.x < L && p.y > 0 && p.y < L) ends.push_back(p);
    std::sort(ends.begin(), ends.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    EXPECT_EQ(ends.size(), inside);
}

TEST(Tessellation, LatticeLengths) {
    std::vector<Point2> lattice;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) lattice.push_back({i + 0.25, j + 0.25});
    const TorusWindow w(10, 2.0);
    const auto rep = replicate_band(lattice, w);
    // Cell boundaries x = i + 0.75 and y = j + 0.75, ten of each, 10 km long.
    EXPECT_NEAR(build_pvt(rep, w).nu1(), 200.0, 1e-9);
    // Unit edges plus one diagonal per cell.
    EXPECT_NEAR(build_pdt(rep, w).nu1(), 200.0 + 100.0 * std::sqrt(2.0), 1e-9);
}

TEST(Tessellation, TotalLengthAndClipping) {
    const TorusWindow w(10);
    EXPECT_NEAR(total_length(Tessellation(TessellationKind::PDT, w, {Segment({1, 1}, {3, 1})})), 2.0, 1e-12);
    const auto clipped = clip_to_window({8, 5}, {12, 5}, 10);
    ASSERT_TRUE(clipped);
    EXPECT_NEAR(clipped->length, 2.0, 1e-12);
    EXPECT_FALSE(clip_to_window({11, 5}, {12, 5}, 10));
    const Tessellation two(TessellationKind::PDT, w, {Segment({1, 1}, {3, 1}), Segment({5, 5}, {5, 8})});
    EXPECT_NEAR(total_length(two), 5.0, 1e-12);
}

TEST(Tessellation, SeedIntensityForGamma) {
    EXPECT_DOUBLE_EQ(seed_intensity_for_gamma(20, TessellationKind::PVT), 100.0);
    // PDT length intensity 32 sqrt(rho) / (3 pi); the Monte Carlo figure is 34.66.
    EXPECT_NEAR(seed_intensity_for_gamma(20, TessellationKind::PDT), std::pow(3 * std::numbers::pi * 20 / 32, 2), 1e-9);
    EXPECT_NEAR(seed_intensity_for_gamma(20, TessellationKind::PDT), 34.66, 0.05);
    EXPECT_DOUBLE_EQ(seed_intensity_for_gamma(1, TessellationKind::PVT), 0.25);
    EXPECT_THROW(seed_intensity_for_gamma(0, TessellationKind::PVT), InvalidParameter);
}

TEST(Tessellation, LengthIntensityCalibration) {
    for (TessellationKind kind : {TessellationKind::PVT, TessellationKind::PDT}) {
        double sum = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) sum += sample_street_system(kind, 20, 10, RngState{s, 1}).nu1() / 100.0;
        EXPECT_NEAR(sum / 100.0, 20.0, 1.0) << to_string(kind);
    }
}

TEST(Tessellation, FixedSeedIdenticalSegments) {
    const auto a = sample_street_system(TessellationKind::PDT, 20, 3, RngState{4, 4});
    const auto b = sample_street_system(TessellationKind::PDT, 20, 3, RngState{4, 4});
    ASSERT_EQ(a.segments().size(), b.segments().size());
    for (std::size_t i = 0; i < a.segments().size(); ++i) {
        EXPECT_EQ(a.segments()[i].a, b.segments()[i].a);
        EXPECT_EQ(a.segments()[i].b, b.segments()[i].b);
    }
}

TEST(Tessellation, PeriodicUnderTranslation) {
    const double L = 5.0;
    for (TessellationKind kind : {TessellationKind::PVT, TessellationKind::PDT}) {
        const double rho = seed_intensity_for_gamma(20, kind);
        const TorusWindow w(L, default_band(rho, L));
        const auto seeds = sample_poisson_points(rho, w, RngState{12, 0});
        std::vector<Point2> moved;
        for (Point2 p : seeds) moved.push_back(w.wrap(p + Point2{L, 0}));
        const auto a = build_tessellation(kind, replicate_band(seeds, w), w).segments();
        const auto b = build_tessellation(kind, replicate_band(moved, w), w).segments();
        ASSERT_EQ(a.size(), b.size());
        auto close = [&](Point2 p, Point2 q) { return oracle::torus_distance(p, q, L) < 1e-9 * L; };
        std::vector<bool> used(b.size(), false);
        for (const Segment& s : a) {
            bool found = false;
            for (std::size_t j = 0; j < b.size() && !found; ++j) {
                if (used[j]) continue;
                if ((close(s.a, b[j].a) && close(s.b, b[j].b)) || (close(s.a, b[j].b) && close(s.b, b[j].a)))
                    used[j] = found = true;
            }
            EXPECT_TRUE(found) << to_string(kind) << " segment (" << s.a.x << ", " << s.a.y << ") - (" << s.b.x
                               << ", " << s.b.y << ") has no translated counterpart";
        }
    }
}

TEST(Tessellation, TranslationByGenericShiftPreservesLength) {
    const double L = 5.0;
    const double rho = seed_intensity_for_gamma(20, TessellationKind::PVT);
    const TorusWindow w(L, default_band(rho, L));
    const auto seeds = sample_poisson_points(rho, w, RngState{13, 0});
    std::vector<Point2> moved;
    for (Point2 p : seeds) moved.push_back(w.wrap(p + Point2{1.37, 2.91}));
    EXPECT_NEAR(build_pvt(replicate_band(seeds, w), w).nu1(), build_pvt(replicate_band(moved, w), w).nu1(), 1e-8);
}

TEST(Tessellation, CollinearSeeds) {
    const TorusWindow w(10, 0.0);
    const auto pvt = build_pvt({{1, 5}, {3, 5}, {7, 5}}, w);
    EXPECT_NEAR(pvt.nu1(), 20.0, 1e-9);
    const auto pdt = build_pdt({{1, 5}, {3, 5}, {7, 5}}, w);
    EXPECT_NEAR(pdt.nu1(), 6.0, 1e-12);
    EXPECT_THROW(build_pvt({{1, 5}}, w), DegenerateInput);
}
