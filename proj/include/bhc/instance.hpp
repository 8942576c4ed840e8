#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "geometry.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace bhc {

// A sampled point set together with the radius it was drawn for.
struct Instance {
    long long n = 0;
    std::vector<Point> points;
    double r_n = 0.0;
    std::uint64_t seed = 0;
};

// Draw n points i.i.d. from the density. Uniform draws use two stream values
// per point; step densities add one acceptance draw per proposal, with the
// density maximum as the rejection envelope.
inline Instance sample_nodes(const ModelParams& p, const Density& d, std::uint64_t seed) {
    p.validate();
    const auto [lo, hi] = d.bounds();
    if (std::abs(lo - p.eps1) > 1e-12 || std::abs(hi - p.eps2) > 1e-12)
        throw std::invalid_argument("density bounds [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] do not match eps1/eps2");
    Instance inst;
    inst.n = p.n;
    inst.r_n = radius(p);
    inst.seed = seed;
    inst.points.reserve(static_cast<std::size_t>(p.n));

    Rng rng(seed);
    for (long long i = 0; i < p.n; ++i) {
        for (;;) {
            Point pt{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
            if (d.is_uniform()) {
                inst.points.push_back(pt);
                break;
            }
            const double v = rng.uniform01();
            if (v * hi <= d.value_at(pt)) {
                inst.points.push_back(pt);
                break;
            }
        }
    }
    return inst;
}

// Wrap an externally supplied point set. p.n must already equal points.size().
inline Instance instance_from_points(const ModelParams& p, std::vector<Point> points,
                                     std::uint64_t seed) {
    if (static_cast<long long>(points.size()) != p.n)
        throw std::invalid_argument("point count " + std::to_string(points.size()) +
                                    " does not match n=" + std::to_string(p.n));
    p.validate();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!in_unit_square(points[i]))
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " lies outside the unit square");
    Instance inst;
    inst.n = p.n;
    inst.points = std::move(points);
    inst.r_n = radius(p);
    inst.seed = seed;
    return inst;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_points_csv(std::ostream& os, const Instance& inst) {
    os << "x,y\n";
    for (const Point& pt : inst.points)
        os << format_double(pt.x) << ',' << format_double(pt.y) << '\n';
}

inline std::vector<Point> read_points_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("points csv is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y") throw std::invalid_argument("points csv must start with header 'x,y'");

    std::vector<Point> points;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* s = line.c_str();
        char* end = nullptr;
        const double x = std::strtod(s, &end);
        if (end == s || *end != ',')
            throw std::invalid_argument("points csv line " + std::to_string(lineno) +
                                        ": expected 'x,y'");
        const char* s2 = end + 1;
        const double y = std::strtod(s2, &end);
        if (end == s2 || *end != '\0')
            throw std::invalid_argument("points csv line " + std::to_string(lineno) +
                                        ": expected 'x,y'");
        Point pt{x, y};
        if (!in_unit_square(pt))
            throw std::invalid_argument("points csv line " + std::to_string(lineno) +
                                        ": point outside the unit square");
        points.push_back(pt);
    }
    return points;
}

}  // namespace bhc
