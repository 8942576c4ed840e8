#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "crossing.hpp"
#include "grid.hpp"

namespace bhc {

// Union of all crossing cells. Horizontal and vertical crossings intersect
// pairwise, so the union is star-connected and lies in a single dense
// component whenever F holds.
struct Backbone {
    std::vector<Crossing> crossings;
    std::vector<CellIdx> cells;  // deduplicated, scan order
    int component = -1;
};

inline Backbone build_backbone(const GridState& g, std::vector<Crossing> crossings) {
    if (crossings.empty()) throw std::invalid_argument("backbone needs at least one crossing");
    Backbone b;
    b.crossings = std::move(crossings);
    std::set<CellIdx> cells;
    for (const Crossing& c : b.crossings)
        for (CellIdx cell : c.cells) cells.insert(cell);
    b.cells.assign(cells.begin(), cells.end());

    b.component = g.component_id[static_cast<std::size_t>(g.idx(b.cells.front()))];
    for (CellIdx cell : b.cells) {
        if (!g.is_dense(cell)) throw std::logic_error("backbone contains a sparse tile");
        if (g.component_id[static_cast<std::size_t>(g.idx(cell))] != b.component)
            throw std::logic_error("backbone spans multiple dense components");
    }
    return b;
}

// I: some dense component other than the backbone's exists. Only meaningful
// under F; callers treat I as false when F fails.
inline std::pair<bool, std::vector<int>> detect_I(const GridState& g, const Backbone& b) {
    std::vector<int> extra;
    for (int id = 0; id < g.component_count; ++id)
        if (id != b.component) extra.push_back(id);
    return {!extra.empty(), extra};
}

// J: some tile with a nonempty neighborhood has every star neighbor sparse.
// Nodes in such a tile's region may be unreachable without long detours.
// A 1 x 1 grid has no neighborhoods at all and never triggers J.
inline std::pair<bool, std::vector<CellIdx>> detect_J(const GridState& g) {
    std::vector<CellIdx> witnesses;
    for (int row = 0; row < g.K; ++row)
        for (int col = 0; col < g.K; ++col) {
            const std::vector<CellIdx> nbs = g.star_neighbors({row, col});
            if (nbs.empty()) continue;
            bool all_sparse = true;
            for (CellIdx nb : nbs)
                if (g.is_dense(nb)) {
                    all_sparse = false;
                    break;
                }
            if (all_sparse) witnesses.push_back({row, col});
        }
    return {!witnesses.empty(), witnesses};
}

// H = F and not I and not J: the regime in which the construction is
// guaranteed to produce a cycle within the bridge budget.
struct EventReport {
    bool F = false;
    bool I = false;
    bool J = false;
    bool H = false;
    std::vector<RectRef> f_failed;
    std::vector<int> i_components;
    std::vector<CellIdx> j_cells;
};

inline EventReport detect_events(const GridState& g, int M_eff) {
    EventReport rep;
    FResult f = detect_F(g, M_eff);
    rep.F = f.ok;
    rep.f_failed = std::move(f.failed);
    if (rep.F) {
        Backbone b = build_backbone(g, std::move(f.crossings));
        auto [i, extra] = detect_I(g, b);
        rep.I = i;
        rep.i_components = std::move(extra);
    }
    auto [j, cells] = detect_J(g);
    rep.J = j;
    rep.j_cells = std::move(cells);
    rep.H = rep.F && !rep.I && !rep.J;
    return rep;
}

}  // namespace bhc
