#pragma once

// CSV persistence for street systems, devices, graphs and estimator records.
// Floating-point fields are written with 17 significant digits so that
// records read back reproduce the stored values exactly.

#include <streetperc/cox.hpp>
#include <streetperc/error.hpp>
#include <streetperc/estimators.hpp>
#include <streetperc/graph.hpp>
#include <streetperc/tessellation.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace streetperc::io {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Short form for human-facing tables.
inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Reads rows after checking the header; calls f(fields, line_number).
template <class F>
void read_rows(std::istream& in, const std::string& header, F&& f) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV, expected header '" + header + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw Error("unexpected CSV header '" + line + "', expected '" + header + "'");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1))
            throw Error("CSV line " + std::to_string(lineno) + ": wrong number of fields");
        try {
            f(fields);
        } catch (const std::logic_error&) {
            throw Error("CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
}

} // namespace detail

inline constexpr const char* kSegmentHeader = "ax,ay,bx,by";
inline constexpr const char* kDeviceHeader = "x,y,segment_index";
inline constexpr const char* kEdgeHeader = "i,j";
inline constexpr const char* kThetaHeader = "k,i,N,nu1,censored";
inline constexpr const char* kCurveHeader = "lambda,p_hat,runs";
inline constexpr const char* kCrossingRunHeader = "run,N,nu1,censored";

inline void write_segments(std::ostream& out, const Tessellation& t) {
    out << kSegmentHeader << '\n';
    for (const Segment& s : t.segments())
        out << num(s.a.x) << ',' << num(s.a.y) << ',' << num(s.b.x) << ',' << num(s.b.y) << '\n';
}

inline std::vector<Segment> read_segments(std::istream& in) {
    std::vector<Segment> out;
    detail::read_rows(in, kSegmentHeader, [&](const std::vector<std::string>& f) {
        out.emplace_back(Point2{std::stod(f[0]), std::stod(f[1])}, Point2{std::stod(f[2]), std::stod(f[3])});
    });
    return out;
}

inline void write_devices(std::ostream& out, const DeviceSet& d) {
    out << kDeviceHeader << '\n';
    for (std::size_t i = 0; i < d.size(); ++i)
        out << num(d.positions[i].x) << ',' << num(d.positions[i].y) << ',' << d.segment_index[i] << '\n';
}

inline void write_edges(std::ostream& out, const GilbertGraph& g) {
    out << kEdgeHeader << '\n';
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto& nb : g.neighbors(static_cast<int>(i)))
            if (static_cast<std::size_t>(nb.id) > i) out << i << ',' << nb.id << '\n';
}

inline void write_theta_samples(std::ostream& out, const std::vector<ThetaSample>& samples) {
    out << kThetaHeader << '\n';
    for (const ThetaSample& s : samples)
        out << s.k << ',' << s.i << ',' << s.N << ',' << num(s.nu1) << ',' << (s.censored ? 1 : 0) << '\n';
}

inline std::vector<ThetaSample> read_theta_samples(std::istream& in) {
    std::vector<ThetaSample> out;
    detail::read_rows(in, kThetaHeader, [&](const std::vector<std::string>& f) {
        out.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stoull(f[2]), std::stod(f[3]), f[4] == "1"});
    });
    return out;
}

inline void write_curve(std::ostream& out, const std::vector<CrossingCurvePoint>& pts) {
    out << kCurveHeader << '\n';
    for (const auto& p : pts) out << num(p.lambda) << ',' << num(p.p_hat) << ',' << p.runs << '\n';
}

inline std::vector<CrossingCurvePoint> read_curve(std::istream& in) {
    std::vector<CrossingCurvePoint> out;
    detail::read_rows(in, kCurveHeader, [&](const std::vector<std::string>& f) {
        out.push_back({std::stod(f[0]), std::stod(f[1]), std::stoi(f[2])});
    });
    return out;
}

inline void write_crossing_runs(std::ostream& out, const std::vector<CrossingRun>& runs) {
    out << kCrossingRunHeader << '\n';
    for (const auto& r : runs) out << r.index << ',' << r.N << ',' << num(r.nu1) << ',' << (r.censored ? 1 : 0) << '\n';
}

inline std::vector<CrossingRun> read_crossing_runs(std::istream& in) {
    std::vector<CrossingRun> out;
    detail::read_rows(in, kCrossingRunHeader, [&](const std::vector<std::string>& f) {
        out.push_back({std::stoi(f[0]), std::stoull(f[1]), std::stod(f[2]), f[3] == "1"});
    });
    return out;
}

template <class Writer>
void write_file(const std::string& path, Writer&& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    w(out);
    if (!out) throw Error("failed writing '" + path + "'");
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

} // namespace streetperc::io
