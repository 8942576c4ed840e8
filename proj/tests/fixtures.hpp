#pragma once

// Hand-built instances and grids for unit tests.

#include <vector>

#include <bhc/grid.hpp>
#include <bhc/instance.hpp>
#include <bhc/params.hpp>

namespace fixtures {

// Center of tile (row, col) in a K x K tiling of [-1/2, 1/2]^2.
inline bhc::Point cell_center(int row, int col, int K) {
    const double t = 1.0 / static_cast<double>(K);
    return {-0.5 + (col + 0.5) * t, -0.5 + (row + 0.5) * t};
}

// Append `count` points inside tile (row, col), spread on a tiny
// deterministic spiral around the center so no two coincide.
inline void fill_cell(std::vector<bhc::Point>& pts, int row, int col, int K, int count) {
    const bhc::Point c = cell_center(row, col, K);
    const double t = 1.0 / static_cast<double>(K);
    for (int i = 0; i < count; ++i) {
        const double angle = 0.7 * i;
        const double rad = 0.25 * t * (static_cast<double>(i + 1) / (count + 1));
        pts.push_back({c.x + rad * std::cos(angle), c.y + rad * std::sin(angle)});
    }
}

// Instance wrapper around literal points; r_n chosen by the caller.
inline bhc::Instance instance_of(std::vector<bhc::Point> pts, double r_n) {
    bhc::Instance inst;
    inst.n = static_cast<long long>(pts.size());
    inst.points = std::move(pts);
    inst.r_n = r_n;
    inst.seed = 0;
    return inst;
}

// TilingSpec with only the fields grid code consumes. r_n is set just above
// the tile diagonal so star-adjacent tiles are always within radius.
inline bhc::TilingSpec spec_of(int K) {
    bhc::TilingSpec ts;
    ts.K = K;
    ts.t_n = 1.0 / static_cast<double>(K);
    ts.r_n = ts.t_n * 1.5;  // > t_n * sqrt(2)
    return ts;
}

// Grid whose dense mask equals the given pattern (pattern[row][col] != 0),
// using L nodes per dense tile and zero per sparse tile.
inline bhc::GridState grid_from_pattern(const std::vector<std::vector<int>>& pattern, int L = 9) {
    const int K = static_cast<int>(pattern.size());
    std::vector<bhc::Point> pts;
    for (int row = 0; row < K; ++row)
        for (int col = 0; col < K; ++col)
            if (pattern[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)])
                fill_cell(pts, row, col, K, L);
    const bhc::TilingSpec ts = spec_of(K);
    const bhc::Instance inst = instance_of(std::move(pts), ts.r_n);
    return bhc::build_grid(inst, ts, L);
}

}  // namespace fixtures
