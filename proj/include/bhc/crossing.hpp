#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace bhc {

enum class Orientation { LR, TB };

// One of the K / M_eff horizontal or vertical rectangles the grid splits
// into. Horizontal rectangle h covers rows [h*M_eff, (h+1)*M_eff); vertical
// rectangle v covers the analogous columns.
struct RectRef {
    Orientation orient = Orientation::LR;
    int index = 0;

    friend bool operator==(RectRef a, RectRef b) {
        return a.orient == b.orient && a.index == b.index;
    }
};

// A side-to-side path of predicate-true cells on an abstract span x breadth
// lattice, from x = 0 to x = span - 1. Canonical choice: breadth-first
// search seeded at x = 0 in ascending y, neighbors expanded in ascending
// (y, x), path recovered from the first dequeued cell on the far side. On an
// all-true lattice this yields exactly the y = 0 row.
template <typename Pred>
std::optional<std::vector<std::pair<int, int>>> find_lattice_crossing(int span, int breadth,
                                                                      AdjMode mode, Pred pred) {
    if (span <= 0 || breadth <= 0) return std::nullopt;
    const int total = span * breadth;
    std::vector<int> parent(static_cast<std::size_t>(total), -2);  // -2 unvisited, -1 seed
    std::queue<int> q;
    auto id = [breadth](int x, int y) { return x * breadth + y; };

    for (int y = 0; y < breadth; ++y)
        if (pred(0, y)) {
            parent[static_cast<std::size_t>(id(0, y))] = -1;
            q.push(id(0, y));
        }
    while (!q.empty()) {
        const int cur = q.front();
        q.pop();
        const int cx = cur / breadth, cy = cur % breadth;
        if (cx == span - 1) {
            std::vector<std::pair<int, int>> path;
            for (int node = cur; node != -1; node = parent[static_cast<std::size_t>(node)])
                path.emplace_back(node / breadth, node % breadth);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (mode == AdjMode::plus && dx != 0 && dy != 0) continue;
                const int nx = cx + dx, ny = cy + dy;
                if (nx < 0 || nx >= span || ny < 0 || ny >= breadth) continue;
                const int nid = id(nx, ny);
                if (parent[static_cast<std::size_t>(nid)] != -2 || !pred(nx, ny)) continue;
                parent[static_cast<std::size_t>(nid)] = cur;
                q.push(nid);
            }
    }
    return std::nullopt;
}

// Side-to-side path of dense tiles through a rectangle: left-to-right for
// horizontal rectangles, top-to-bottom for vertical ones, star adjacency.
struct Crossing {
    RectRef rect;
    std::vector<CellIdx> cells;
};

inline std::optional<Crossing> find_crossing(const GridState& g, RectRef rect, int M_eff) {
    const int base = rect.index * M_eff;
    std::optional<std::vector<std::pair<int, int>>> path;
    std::vector<CellIdx> cells;
    if (rect.orient == Orientation::LR) {
        path = find_lattice_crossing(g.K, M_eff, AdjMode::star, [&](int x, int y) {
            return g.is_dense({base + y, x});
        });
        if (!path) return std::nullopt;
        for (auto [x, y] : *path) cells.push_back({base + y, x});
    } else {
        path = find_lattice_crossing(g.K, M_eff, AdjMode::star, [&](int x, int y) {
            return g.is_dense({g.K - 1 - x, base + y});
        });
        if (!path) return std::nullopt;
        for (auto [x, y] : *path) cells.push_back({g.K - 1 - x, base + y});
    }
    return Crossing{rect, std::move(cells)};
}

// Dual witness: a plus-connected path of sparse tiles spanning the short
// direction of the rectangle. Exactly one of find_crossing /
// sparse_dual_crossing succeeds for any rectangle.
inline std::optional<std::vector<CellIdx>> sparse_dual_crossing(const GridState& g, RectRef rect,
                                                                int M_eff) {
    const int base = rect.index * M_eff;
    std::optional<std::vector<std::pair<int, int>>> path;
    std::vector<CellIdx> cells;
    if (rect.orient == Orientation::LR) {
        const int top = base + M_eff - 1;
        path = find_lattice_crossing(M_eff, g.K, AdjMode::plus, [&](int x, int y) {
            return !g.is_dense({top - x, y});
        });
        if (!path) return std::nullopt;
        for (auto [x, y] : *path) cells.push_back({top - x, y});
    } else {
        path = find_lattice_crossing(M_eff, g.K, AdjMode::plus, [&](int x, int y) {
            return !g.is_dense({y, base + x});
        });
        if (!path) return std::nullopt;
        for (auto [x, y] : *path) cells.push_back({y, base + x});
    }
    return cells;
}

// Every rectangle of both orientations is crossed by dense tiles. The
// crossings form the backbone; failed rectangles witness the complement.
struct FResult {
    bool ok = false;
    std::vector<Crossing> crossings;
    std::vector<RectRef> failed;
};

inline FResult detect_F(const GridState& g, int M_eff) {
    if (M_eff < 1 || g.K % M_eff != 0)
        throw std::invalid_argument("M_eff must divide K, got M_eff=" + std::to_string(M_eff) +
                                    " K=" + std::to_string(g.K));
    FResult res;
    const int nrect = g.K / M_eff;
    for (Orientation o : {Orientation::LR, Orientation::TB})
        for (int i = 0; i < nrect; ++i) {
            RectRef rect{o, i};
            if (auto c = find_crossing(g, rect, M_eff))
                res.crossings.push_back(std::move(*c));
            else
                res.failed.push_back(rect);
        }
    res.ok = res.failed.empty();
    return res;
}

}  // namespace bhc
