#include <streetperc/cox.hpp>

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

using namespace streetperc;

namespace {

// One-sample Kolmogorov-Smirnov statistic against U(0, 1).
double ks_uniform(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        d = std::max({d, (i + 1) / n - u[i], u[i] - i / n});
    return d;
}

// Asymptotic critical value of sqrt(n) D_n at the 1% level.
bool ks_accepts(const std::vector<double>& u) {
    return ks_uniform(u) * std::sqrt(static_cast<double>(u.size())) < 1.6276;
}

double segment_distance(Point2 p, const Segment& s) {
    const Point2 d = s.b - s.a;
    const double t = std::clamp(((p.x - s.a.x) * d.x + (p.y - s.a.y) * d.y) / (s.length * s.length), 0.0, 1.0);
    return distance(p, s.at(t));
}

} // namespace

TEST(UniformOnStreets, SingleSegmentIsUniform) {
    const Tessellation t(TessellationKind::PDT, TorusWindow(10), {Segment({1, 2}, {7, 2})});
    std::vector<double> u;
    for (int k = 0; k < 10000; ++k) {
        const StreetPoint p = sample_uniform_on_streets(t, RngState{3, static_cast<std::uint64_t>(k)});
        EXPECT_EQ(p.segment, 0);
        EXPECT_NEAR(p.position.y, 2.0, 1e-12);
        u.push_back((p.position.x - 1.0) / 6.0);
    }
    EXPECT_TRUE(ks_accepts(u));
}

TEST(UniformOnStreets, LengthWeightedSegmentChoice) {
    const Tessellation t(TessellationKind::PDT, TorusWindow(10), {Segment({1, 1}, {2, 1}), Segment({1, 5}, {4, 5})});
    const int n = 10000;
    int first = 0;
    for (int k = 0; k < n; ++k) first += sample_uniform_on_streets(t, RngState{8, static_cast<std::uint64_t>(k)}).segment == 0;
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    EXPECT_LT(std::abs(first - 0.25 * n), 3 * sigma);
}

TEST(UniformOnStreets, FixedSeedDeterministic) {
    const auto t = sample_street_system(TessellationKind::PVT, 20, 2, RngState{1, 0});
    const auto a = sample_uniform_on_streets(t, RngState{9, 9});
    const auto b = sample_uniform_on_streets(t, RngState{9, 9});
    EXPECT_EQ(a.position, b.position);
    EXPECT_EQ(a.segment, b.segment);
}

TEST(UniformOnStreets, EmptyTessellationThrows) {
    const Tessellation t(TessellationKind::PVT, TorusWindow(10), {});
    EXPECT_THROW(sample_uniform_on_streets(t, RngState{1, 1}), InvalidState);
}

TEST(Cox, ZeroIntensityIsEmpty) {
    const auto t = sample_street_system(TessellationKind::PVT, 20, 2, RngState{1, 0});
    EXPECT_EQ(sample_cox(t, 0.0, RngState{1, 1}).size(), 0u);
    EXPECT_THROW(sample_cox(t, -1.0, RngState{1, 1}), InvalidParameter);
}

TEST(Cox, MeanCountMatchesLambdaNu1) {
    // 2000 km of streets: 200 horizontal lines of length 10 in a 10 km window.
    std::vector<Segment> segs;
    for (int k = 0; k < 200; ++k) segs.emplace_back(Point2{0, k * 0.05}, Point2{10, k * 0.05});
    const Tessellation t(TessellationKind::PDT, TorusWindow(10), segs);
    ASSERT_NEAR(t.nu1(), 2000.0, 1e-9);
    const int seeds = 1000;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(sample_cox(t, 1.0, RngState{static_cast<std::uint64_t>(s), 2}).size());
    EXPECT_LT(std::abs(sum / seeds - 2000.0), 3.0 * std::sqrt(2000.0 / seeds));
}

TEST(Cox, DevicesLieOnTheSkeletonAndCountsAreLengthProportional) {
    const auto t = sample_street_system(TessellationKind::PDT, 20, 3, RngState{2, 0});
    const double lambda = 4.0;
    const int seeds = 1000;
    // Sub-window A = [0, 1.5] x [0, 3].
    double nu1_A = 0.0;
    for (const Segment& s : t.segments()) {
        if (auto c = clip_to_window(s.a, s.b, 1.5)) nu1_A += c->length; // clips to [0,1.5]^2
        if (auto c = clip_to_window(s.a - Point2{0, 1.5}, s.b - Point2{0, 1.5}, 1.5)) nu1_A += c->length;
    }
    double sum = 0.0, sum2 = 0.0, sum_A = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const DeviceSet d = sample_cox(t, lambda, RngState{static_cast<std::uint64_t>(s), 5});
        for (std::size_t i = 0; i < d.size(); ++i) {
            ASSERT_LT(segment_distance(d.positions[i], t.segments()[static_cast<std::size_t>(d.segment_index[i])]),
                      1e-9 * 3.0);
            sum_A += d.positions[i].x <= 1.5;
        }
        const double n = static_cast<double>(d.size());
        sum += n;
        sum2 += n * n;
    }
    const double mean = sum / seeds, expected = lambda * t.nu1();
    EXPECT_LT(std::abs(mean - expected), 3.0 * std::sqrt(expected / seeds));
    const double expected_A = lambda * nu1_A;
    EXPECT_LT(std::abs(sum_A / seeds - expected_A), 3.0 * std::sqrt(expected_A / seeds));
    const double dispersion = (sum2 - seeds * mean * mean) / mean;
    boost::math::chi_squared chi(seeds - 1);
    EXPECT_GT(dispersion, boost::math::quantile(chi, 0.005));
    EXPECT_LT(dispersion, boost::math::quantile(chi, 0.995));
}

TEST(Cox, SegmentHitFrequenciesProportionalToLength) {
    const Tessellation t(TessellationKind::PDT, TorusWindow(10),
                         {Segment({0, 0}, {1, 0}), Segment({0, 1}, {2, 1}), Segment({0, 2}, {3, 2}), Segment({0, 3}, {4, 3})});
    std::vector<double> hits(4, 0.0);
    const DeviceSet d = sample_cox(t, 2000.0, RngState{77, 0});
    for (int s : d.segment_index) hits[static_cast<std::size_t>(s)] += 1;
    double chi2 = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double e = static_cast<double>(d.size()) * (k + 1) / 10.0;
        chi2 += (hits[static_cast<std::size_t>(k)] - e) * (hits[static_cast<std::size_t>(k)] - e) / e;
    }
    EXPECT_LT(chi2, boost::math::quantile(boost::math::chi_squared(3), 0.99));
}

TEST(SequentialSampler, StreamIsReplayableAndChunkInvariant) {
    const auto t = sample_street_system(TessellationKind::PVT, 20, 2, RngState{1, 0});
    SequentialSampler a(t, RngState{6, 1}), b(t, RngState{6, 1});
    std::vector<Point2> one;
    for (int k = 0; k < 50; ++k) one.push_back(a.next().position);
    std::vector<Point2> two;
    for (int k = 0; k < 20; ++k) two.push_back(b.next().position);
    for (int k = 0; k < 30; ++k) two.push_back(b.next().position);
    EXPECT_EQ(one, two);
    EXPECT_EQ(a.emitted(), 50u);
}

TEST(SequentialSampler, DrawsAreUniformPerCoordinate) {
    const Tessellation t(TessellationKind::PDT, TorusWindow(10), {Segment({0, 3}, {10, 3}), Segment({4, 0}, {4, 10})});
    SequentialSampler s(t, RngState{21, 0});
    std::vector<double> u;
    for (int k = 0; k < 5000; ++k) {
        const StreetPoint p = s.next();
        u.push_back(p.segment == 0 ? p.position.x / 10.0 : p.position.y / 10.0);
    }
    EXPECT_TRUE(ks_accepts(u));
}
