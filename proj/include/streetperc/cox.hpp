#pragma once

#include <streetperc/error.hpp>
#include <streetperc/geometry.hpp>
#include <streetperc/tessellation.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace streetperc {

/// Whether the marked origin counts towards the Poisson device count J.
/// The origin is an extra Palm point, so by default it does not.
inline constexpr bool kOriginCountsTowardJ = false;

/// Device locations on the street skeleton.
struct DeviceSet {
    std::vector<Point2> positions;
    std::vector<int> segment_index;
    std::optional<Point2> origin;

    std::size_t size() const { return positions.size(); }
};

/// Cumulative segment lengths for inverse-CDF selection of a segment.
class LengthTable {
public:
    explicit LengthTable(const Tessellation& t) {
        cumulative_.reserve(t.segments().size());
        double acc = 0.0;
        for (const Segment& s : t.segments()) {
            acc += s.length;
            cumulative_.push_back(acc);
        }
    }

    double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
    const std::vector<double>& cumulative() const { return cumulative_; }

    /// Segment containing arc-length position u in [0, total).
    int segment_at(double u) const {
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<int>(it - cumulative_.begin());
    }

private:
    std::vector<double> cumulative_;
};

struct StreetPoint {
    Point2 position;
    int segment = -1;
};

namespace detail {
inline StreetPoint draw_on_streets(const Tessellation& t, const LengthTable& table, Engine& eng) {
    const int k = table.segment_at(uniform01(eng) * table.total());
    const Segment& s = t.segments()[static_cast<std::size_t>(k)];
    return {t.window().wrap(s.at(uniform01(eng))), k};
}

inline void require_streets(const LengthTable& table) {
    if (!(table.total() > 0.0)) throw InvalidState("street system has zero total length");
}
} // namespace detail

/// One point uniform with respect to length measure on the streets.
inline StreetPoint sample_uniform_on_streets(const Tessellation& t, RngState rng) {
    const LengthTable table(t);
    detail::require_streets(table);
    Engine eng = rng.engine();
    return detail::draw_on_streets(t, table, eng);
}

/// Cox process: Poisson(lambda * nu1) devices, i.i.d. uniform on the streets.
inline DeviceSet sample_cox(const Tessellation& t, double lambda, RngState rng) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParameter("device intensity lambda must be >= 0");
    DeviceSet out;
    if (lambda == 0.0 || t.nu1() == 0.0) return out;
    const LengthTable table(t);
    Engine eng = rng.engine();
    const auto count = sample_poisson_count(lambda * table.total(), eng);
    out.positions.reserve(count);
    out.segment_index.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) {
        const StreetPoint p = detail::draw_on_streets(t, table, eng);
        out.positions.push_back(p.position);
        out.segment_index.push_back(p.segment);
    }
    return out;
}

/// Endless stream of i.i.d. length-uniform street points. The first j draws
/// of the stream, with j ~ Poisson(lambda * nu1), form a Cox sample.
class SequentialSampler {
public:
    SequentialSampler(const Tessellation& t, RngState rng) : t_(&t), table_(t), eng_(rng.engine()) {
        detail::require_streets(table_);
    }

    StreetPoint next() {
        ++emitted_;
        return detail::draw_on_streets(*t_, table_, eng_);
    }

    std::size_t emitted() const { return emitted_; }

private:
    const Tessellation* t_;
    LengthTable table_;
    Engine eng_;
    std::size_t emitted_ = 0;
};

} // namespace streetperc
