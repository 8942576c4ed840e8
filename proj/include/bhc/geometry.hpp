#pragma once

#include <cmath>

namespace bhc {

// Point in the unit square S = [-1/2, 1/2]^2.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(Point a, Point b) {
    return std::sqrt(dist2(a, b));
}

inline bool in_unit_square(Point p) {
    return p.x >= -0.5 && p.x <= 0.5 && p.y >= -0.5 && p.y <= 0.5;
}

}  // namespace bhc
