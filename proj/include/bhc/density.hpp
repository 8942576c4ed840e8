#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace bhc {

// Axis-aligned patch of constant density inside the unit square.
struct DensityPatch {
    double x0 = 0.0, y0 = 0.0;
    double x1 = 0.0, y1 = 0.0;
    double weight = 1.0;
};

// Sampling density on S = [-1/2, 1/2]^2: either uniform or a piecewise
// constant step function whose patches partition S and integrate to 1.
class Density {
public:
    static Density uniform() { return Density({}); }

    static Density step(std::vector<DensityPatch> patches) {
        if (patches.empty()) throw std::invalid_argument("step density needs at least one patch");
        double area = 0.0, mass = 0.0;
        for (std::size_t i = 0; i < patches.size(); ++i) {
            const DensityPatch& p = patches[i];
            if (!(p.x0 < p.x1) || !(p.y0 < p.y1))
                throw std::invalid_argument("patch " + std::to_string(i) + " is degenerate");
            if (p.x0 < -0.5 || p.x1 > 0.5 || p.y0 < -0.5 || p.y1 > 0.5)
                throw std::invalid_argument("patch " + std::to_string(i) +
                                            " extends outside the unit square");
            if (!(p.weight > 0.0))
                throw std::invalid_argument("patch " + std::to_string(i) +
                                            " weight must be positive");
            for (std::size_t j = 0; j < i; ++j) {
                const DensityPatch& q = patches[j];
                const bool overlap =
                    p.x0 < q.x1 && q.x0 < p.x1 && p.y0 < q.y1 && q.y0 < p.y1;
                if (overlap)
                    throw std::invalid_argument("patches " + std::to_string(j) + " and " +
                                                std::to_string(i) + " overlap");
            }
            const double a = (p.x1 - p.x0) * (p.y1 - p.y0);
            area += a;
            mass += a * p.weight;
        }
        if (std::abs(area - 1.0) > 1e-12)
            throw std::invalid_argument("patches must cover the unit square, total area " +
                                        std::to_string(area));
        if (std::abs(mass - 1.0) > 1e-12)
            throw std::invalid_argument("density must integrate to 1, got " +
                                        std::to_string(mass));
        return Density(std::move(patches));
    }

    bool is_uniform() const { return patches_.empty(); }

    // Density value at a point. Patch edges are closed; points on a shared
    // edge take the first matching patch (a measure-zero choice).
    double value_at(Point pt) const {
        if (patches_.empty()) return 1.0;
        for (const DensityPatch& p : patches_)
            if (pt.x >= p.x0 && pt.x <= p.x1 && pt.y >= p.y0 && pt.y <= p.y1) return p.weight;
        return 0.0;
    }

    // (min, max) of the density over S.
    std::pair<double, double> bounds() const {
        if (patches_.empty()) return {1.0, 1.0};
        double lo = patches_[0].weight, hi = patches_[0].weight;
        for (const DensityPatch& p : patches_) {
            if (p.weight < lo) lo = p.weight;
            if (p.weight > hi) hi = p.weight;
        }
        return {lo, hi};
    }

    const std::vector<DensityPatch>& patches() const { return patches_; }

private:
    explicit Density(std::vector<DensityPatch> patches) : patches_(std::move(patches)) {}

    std::vector<DensityPatch> patches_;
};

inline std::pair<double, double> density_bounds(const Density& d) { return d.bounds(); }

}  // namespace bhc
