#pragma once

#include <array>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "instance.hpp"
#include "params.hpp"

namespace bhc {

// Tile coordinates: row 0 is the bottom row, col 0 the left column.
struct CellIdx {
    int row = 0;
    int col = 0;

    friend bool operator==(CellIdx a, CellIdx b) { return a.row == b.row && a.col == b.col; }
    friend bool operator!=(CellIdx a, CellIdx b) { return !(a == b); }
    friend bool operator<(CellIdx a, CellIdx b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

enum class AdjMode { star, plus };  // star = 8-neighborhood, plus = 4-neighborhood

inline bool adjacent(CellIdx a, CellIdx b, AdjMode mode) {
    const int dr = a.row - b.row, dc = a.col - b.col;
    const int adr = dr < 0 ? -dr : dr, adc = dc < 0 ? -dc : dc;
    if (adr > 1 || adc > 1 || (adr == 0 && adc == 0)) return false;
    return mode == AdjMode::star || adr + adc == 1;
}

// K x K tiling of the unit square with per-tile node lists, the dense mask
// (count >= L), and star-connected components of dense tiles.
struct GridState {
    int K = 1;
    int L = 9;
    long long n = 0;
    std::vector<std::vector<int>> cells;  // row-major, index = row * K + col
    std::vector<char> dense;
    std::vector<int> component_id;  // -1 for sparse tiles
    int component_count = 0;

    int idx(int row, int col) const { return row * K + col; }
    int idx(CellIdx c) const { return c.row * K + c.col; }
    bool in_bounds(CellIdx c) const {
        return c.row >= 0 && c.row < K && c.col >= 0 && c.col < K;
    }
    bool is_dense(CellIdx c) const { return dense[static_cast<std::size_t>(idx(c))] != 0; }
    int count(CellIdx c) const {
        return static_cast<int>(cells[static_cast<std::size_t>(idx(c))].size());
    }

    // Star neighbors in scan order (row ascending, then col ascending).
    std::vector<CellIdx> star_neighbors(CellIdx c) const {
        std::vector<CellIdx> out;
        out.reserve(8);
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                CellIdx nb{c.row + dr, c.col + dc};
                if (in_bounds(nb)) out.push_back(nb);
            }
        return out;
    }
};

// Tile holding a point: floor((coord + 1/2) * K), clamped so the topmost and
// rightmost boundaries fall into the last tile. Uses integer K directly; the
// rounded 1/K double never enters the bucketing.
inline int tile_coord(double v, int K) {
    int i = static_cast<int>(std::floor((v + 0.5) * static_cast<double>(K)));
    if (i < 0) i = 0;
    if (i >= K) i = K - 1;
    return i;
}

inline CellIdx cell_of(Point p, int K) { return {tile_coord(p.y, K), tile_coord(p.x, K)}; }

inline GridState build_grid(const Instance& inst, const TilingSpec& spec, int L) {
    if (L < 9) throw std::invalid_argument("L must be >= 9, got " + std::to_string(L));
    GridState g;
    g.K = spec.K;
    g.L = L;
    g.n = inst.n;
    const std::size_t total = static_cast<std::size_t>(g.K) * static_cast<std::size_t>(g.K);
    g.cells.assign(total, {});
    g.dense.assign(total, 0);
    g.component_id.assign(total, -1);

    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        if (!in_unit_square(inst.points[i]))
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " lies outside the unit square");
        g.cells[static_cast<std::size_t>(g.idx(cell_of(inst.points[i], g.K)))].push_back(
            static_cast<int>(i));
    }
    for (std::size_t c = 0; c < total; ++c)
        g.dense[c] = g.cells[c].size() >= static_cast<std::size_t>(L) ? 1 : 0;

    // Label star-connected dense components in scan order: component 0 is the
    // one containing the first dense tile encountered, and so on.
    int next = 0;
    for (int row = 0; row < g.K; ++row)
        for (int col = 0; col < g.K; ++col) {
            const int start = g.idx(row, col);
            if (!g.dense[static_cast<std::size_t>(start)] ||
                g.component_id[static_cast<std::size_t>(start)] != -1)
                continue;
            std::queue<CellIdx> q;
            q.push({row, col});
            g.component_id[static_cast<std::size_t>(start)] = next;
            while (!q.empty()) {
                CellIdx cur = q.front();
                q.pop();
                for (CellIdx nb : g.star_neighbors(cur)) {
                    const int ni = g.idx(nb);
                    if (g.dense[static_cast<std::size_t>(ni)] &&
                        g.component_id[static_cast<std::size_t>(ni)] == -1) {
                        g.component_id[static_cast<std::size_t>(ni)] = next;
                        q.push(nb);
                    }
                }
            }
            ++next;
        }
    g.component_count = next;
    return g;
}

}  // namespace bhc
