#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "backbone.hpp"
#include "grid.hpp"
#include "instance.hpp"

namespace bhc {

// Sorting the node indices fixes the small cycle: visit ascending, wrap from
// the largest back to the smallest.
inline std::vector<int> small_cycle(std::vector<int> nodes) {
    if (nodes.size() < 3)
        throw std::invalid_argument("a cycle needs at least 3 nodes, got " +
                                    std::to_string(nodes.size()));
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

inline std::pair<int, int> norm_edge(int a, int b) {
    return a < b ? std::pair<int, int>{a, b} : std::pair<int, int>{b, a};
}

// Growing cycle plus the per-tile ledger. surviving[tile] holds the edges of
// that tile's original small cycle still present; removed[tile] counts the
// ones spliced out. Every tile keeps at least L - 8 surviving edges, which
// is what lets later merges always find an edge to cut.
struct CycleState {
    int K = 1;
    std::vector<int> order;
    std::map<int, std::set<std::pair<int, int>>> surviving;
    std::map<int, int> removed;

    struct AddedEdge {
        int u = 0, v = 0;
        double length = 0.0;
    };
    std::vector<AddedEdge> added;

    int key(CellIdx c) const { return c.row * K + c.col; }
};

inline CycleState init_cycle(const GridState& g, CellIdx root) {
    CycleState st;
    st.K = g.K;
    st.order = small_cycle(g.cells[static_cast<std::size_t>(g.idx(root))]);
    std::set<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < st.order.size(); ++i)
        edges.insert(norm_edge(st.order[i], st.order[(i + 1) % st.order.size()]));
    st.surviving[st.key(root)] = std::move(edges);
    st.removed[st.key(root)] = 0;
    return st;
}

namespace detail {

// Locate the anchor's first surviving edge on the cycle and orient it so v
// directly follows u. Returns (u, v, position of u).
struct CutEdge {
    int u = 0, v = 0;
    std::size_t pos_u = 0;
};

inline CutEdge cut_surviving_edge(CycleState& st, CellIdx anchor) {
    auto it = st.surviving.find(st.key(anchor));
    if (it == st.surviving.end() || it->second.empty())
        throw std::logic_error("anchor tile has no surviving edge");
    const auto [e1, e2] = *it->second.begin();

    const std::size_t m = st.order.size();
    std::size_t p1 = m, p2 = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (st.order[i] == e1) p1 = i;
        if (st.order[i] == e2) p2 = i;
    }
    if (p1 == m || p2 == m) throw std::logic_error("surviving edge endpoints not on cycle");

    CutEdge cut;
    if (st.order[(p1 + 1) % m] == e2) {
        cut.u = e1;
        cut.v = e2;
        cut.pos_u = p1;
    } else if (st.order[(p2 + 1) % m] == e1) {
        cut.u = e2;
        cut.v = e1;
        cut.pos_u = p2;
    } else {
        throw std::logic_error("surviving edge is not a cycle edge");
    }
    it->second.erase(norm_edge(e1, e2));
    st.removed[st.key(anchor)] += 1;
    return cut;
}

// Cycle rewritten as the path v, ..., u (everything except the cut edge).
inline std::vector<int> open_at(const std::vector<int>& order, std::size_t pos_u) {
    const std::size_t m = order.size();
    std::vector<int> path;
    path.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) path.push_back(order[(pos_u + i) % m]);
    return path;
}

}  // namespace detail

// Splice an incoming tile cycle into the main cycle. Cut the anchor's first
// surviving edge (u, v) and the incoming edge between its two lowest nodes
// (a, b), then reconnect with whichever cross pairing keeps the longer of
// the two new edges shortest.
inline void merge_cycles(CycleState& st, const std::vector<int>& incoming, CellIdx cell,
                         CellIdx anchor, const Instance& inst) {
    if (incoming.size() < 3) throw std::invalid_argument("incoming cycle needs >= 3 nodes");
    const detail::CutEdge cut = detail::cut_surviving_edge(st, anchor);
    const int a = incoming[0], b = incoming[1];

    const auto at = [&](int i) { return inst.points[static_cast<std::size_t>(i)]; };
    const double straight = std::max(dist(at(cut.u), at(a)), dist(at(cut.v), at(b)));
    const double crossed = std::max(dist(at(cut.u), at(b)), dist(at(cut.v), at(a)));
    const bool pair_ua = straight <= crossed;

    std::vector<int> path = detail::open_at(st.order, cut.pos_u);  // v ... u
    std::vector<int> in_path;                                      // b ... a along the incoming cycle
    in_path.reserve(incoming.size());
    for (std::size_t i = 1; i < incoming.size(); ++i) in_path.push_back(incoming[i]);
    in_path.push_back(a);
    if (pair_ua) std::reverse(in_path.begin(), in_path.end());  // now a ... b
    path.insert(path.end(), in_path.begin(), in_path.end());
    st.order = std::move(path);

    const int first = pair_ua ? a : b, last = pair_ua ? b : a;
    st.added.push_back({cut.u, first, dist(at(cut.u), at(first))});
    st.added.push_back({cut.v, last, dist(at(cut.v), at(last))});

    std::set<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < incoming.size(); ++i)
        edges.insert(norm_edge(incoming[i], incoming[(i + 1) % incoming.size()]));
    edges.erase(norm_edge(a, b));
    st.surviving[st.key(cell)] = std::move(edges);
    st.removed[st.key(cell)] = 1;
}

// Splice a path of new nodes (ascending order) into the cycle at the
// anchor's first surviving edge. The path endpoints take the cross pairing
// that keeps the longer new edge shortest; interior path edges join
// consecutive indices within one tile.
inline void attach_path(CycleState& st, const std::vector<int>& nodes, CellIdx anchor,
                        const Instance& inst) {
    if (nodes.empty()) throw std::invalid_argument("attach_path needs at least one node");
    const detail::CutEdge cut = detail::cut_surviving_edge(st, anchor);
    const int a = nodes.front(), b = nodes.back();

    const auto at = [&](int i) { return inst.points[static_cast<std::size_t>(i)]; };
    const double straight = std::max(dist(at(cut.u), at(a)), dist(at(cut.v), at(b)));
    const double crossed = std::max(dist(at(cut.u), at(b)), dist(at(cut.v), at(a)));
    const bool pair_ua = straight <= crossed;

    std::vector<int> path = detail::open_at(st.order, cut.pos_u);  // v ... u
    if (pair_ua)
        path.insert(path.end(), nodes.begin(), nodes.end());
    else
        path.insert(path.end(), nodes.rbegin(), nodes.rend());
    st.order = std::move(path);

    const int first = pair_ua ? a : b, last = pair_ua ? b : a;
    st.added.push_back({cut.u, first, dist(at(cut.u), at(first))});
    st.added.push_back({cut.v, last, dist(at(cut.v), at(last))});
}

// Deterministic merge schedule for one dense component: breadth-first from
// the lexicographically smallest tile, each later tile anchored to the
// already-merged star neighbor with the most surviving edges (ties to the
// smallest tile). Surviving counts evolve by pure arithmetic (anchor loses
// one edge, an incoming tile of c nodes arrives with c - 1), so the
// schedule is fixed before any cycle exists.
struct MergeStep {
    CellIdx cell;
    CellIdx anchor;
};

struct MergePlan {
    CellIdx root;
    std::vector<MergeStep> steps;
};

inline MergePlan plan_component_merge(const GridState& g, int component,
                                      std::optional<CellIdx> root = std::nullopt) {
    MergePlan plan;
    if (root) {
        if (g.component_id[static_cast<std::size_t>(g.idx(*root))] != component)
            throw std::invalid_argument("root tile is not in the requested component");
        plan.root = *root;
    } else {
        bool found = false;
        for (int row = 0; row < g.K && !found; ++row)
            for (int col = 0; col < g.K && !found; ++col)
                if (g.component_id[static_cast<std::size_t>(g.idx(row, col))] == component) {
                    plan.root = {row, col};
                    found = true;
                }
        if (!found)
            throw std::invalid_argument("component " + std::to_string(component) + " is empty");
    }

    std::map<int, int> surv;
    std::vector<char> merged(static_cast<std::size_t>(g.K) * static_cast<std::size_t>(g.K), 0);
    surv[g.idx(plan.root)] = g.count(plan.root);
    merged[static_cast<std::size_t>(g.idx(plan.root))] = 1;

    std::queue<CellIdx> q;
    q.push(plan.root);
    std::vector<char> seen = merged;
    while (!q.empty()) {
        CellIdx cur = q.front();
        q.pop();
        if (cur != plan.root) {
            CellIdx anchor{-1, -1};
            int best = 0;
            for (CellIdx nb : g.star_neighbors(cur)) {
                if (!merged[static_cast<std::size_t>(g.idx(nb))]) continue;
                const int s = surv[g.idx(nb)];
                if (s > best || (s == best && anchor.row >= 0 && nb < anchor)) {
                    best = s;
                    anchor = nb;
                }
            }
            if (best < 1) throw std::logic_error("no anchored neighbor with surviving edges");
            surv[g.idx(anchor)] -= 1;
            surv[g.idx(cur)] = g.count(cur) - 1;
            merged[static_cast<std::size_t>(g.idx(cur))] = 1;
            plan.steps.push_back({cur, anchor});
        }
        for (CellIdx nb : g.star_neighbors(cur)) {
            const std::size_t ni = static_cast<std::size_t>(g.idx(nb));
            if (seen[ni] || g.component_id[ni] != component) continue;
            seen[ni] = 1;
            q.push(nb);
        }
    }
    return plan;
}

// Root at the backbone's lowest (row, col) tile; the plan covers the whole
// backbone component.
inline MergePlan merge_order(const GridState& g, const Backbone& b) {
    return plan_component_merge(g, b.component, b.cells.front());
}

// Cycle-level bridge accounting. Bridges are edges of length >= r_n, the
// ones a plain radius graph would not contain.
struct BridgeStats {
    long long n_edges = 0;
    long long n_br = 0;
    double max_edge = 0.0;
    double gamma_actual = 0.0;
    long long t_dense = 0;
    int removed_max = 0;
};

inline BridgeStats classify_edges(const CycleState& st, const Instance& inst) {
    BridgeStats s;
    const std::size_t m = st.order.size();
    s.n_edges = static_cast<long long>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point p = inst.points[static_cast<std::size_t>(st.order[i])];
        const Point q = inst.points[static_cast<std::size_t>(st.order[(i + 1) % m])];
        const double len = dist(p, q);
        if (len > s.max_edge) s.max_edge = len;
        if (len >= inst.r_n) ++s.n_br;
    }
    s.gamma_actual = m > 0 ? static_cast<double>(s.n_br) / static_cast<double>(m) : 0.0;
    for (const auto& [cell, cnt] : st.removed)
        if (cnt > s.removed_max) s.removed_max = cnt;
    return s;
}

struct Verdict {
    bool ok = true;
    std::vector<std::string> reasons;
};

// Independent check of the construction's promises: the order visits every
// node exactly once, every edge is strictly shorter than width, and the
// bridge fraction stays within budget.
inline Verdict validate(const CycleState& st, const Instance& inst, const BridgeStats& stats,
                        double width, double budget) {
    Verdict v;
    auto fail = [&](std::string reason) {
        v.ok = false;
        v.reasons.push_back(std::move(reason));
    };

    const std::size_t m = st.order.size();
    if (static_cast<long long>(m) != inst.n)
        fail("not Hamiltonian: cycle visits " + std::to_string(m) + " nodes, expected " +
             std::to_string(inst.n));
    std::vector<char> used(inst.points.size(), 0);
    bool index_ok = true;
    for (int node : st.order) {
        if (node < 0 || static_cast<std::size_t>(node) >= inst.points.size()) {
            fail("not Hamiltonian: node index " + std::to_string(node) + " out of range");
            index_ok = false;
            break;
        }
        if (used[static_cast<std::size_t>(node)]) {
            fail("not Hamiltonian: node " + std::to_string(node) + " visited twice");
            index_ok = false;
            break;
        }
        used[static_cast<std::size_t>(node)] = 1;
    }
    if (!index_ok || m < 3) {
        if (m < 3) fail("cycle has fewer than 3 nodes");
        return v;
    }

    long long n_br = 0;
    double max_edge = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Point p = inst.points[static_cast<std::size_t>(st.order[i])];
        const Point q = inst.points[static_cast<std::size_t>(st.order[(i + 1) % m])];
        const double len = dist(p, q);
        if (len > max_edge) max_edge = len;
        if (len >= inst.r_n) ++n_br;
        if (!(len < width))
            fail("edge (" + std::to_string(st.order[i]) + ", " +
                 std::to_string(st.order[(i + 1) % m]) + ") has length " + std::to_string(len) +
                 ", not below " + std::to_string(width));
    }
    const double frac = static_cast<double>(n_br) / static_cast<double>(m);
    if (frac > budget)
        fail("bridge fraction " + std::to_string(frac) + " exceeds budget " +
             std::to_string(budget));
    if (n_br != stats.n_br || max_edge != stats.max_edge ||
        stats.n_edges != static_cast<long long>(m))
        fail("reported stats disagree with the cycle");
    return v;
}

// Assemble the full cycle under event H: merge every tile of the backbone's
// component in plan order, then splice each occupied sparse tile's nodes
// into its best dense neighbor.
inline std::pair<CycleState, BridgeStats> construct_hamiltonian(const Instance& inst,
                                                                const GridState& g,
                                                                const Backbone& b) {
    if (inst.n < 3)
        throw std::invalid_argument("need at least 3 nodes, got " + std::to_string(inst.n));
    if (detect_I(g, b).first)
        throw std::invalid_argument("construction requires H: extra dense component present");
    if (detect_J(g).first)
        throw std::invalid_argument("construction requires H: tile with all-sparse neighborhood");

    const MergePlan plan = merge_order(g, b);
    CycleState st = init_cycle(g, plan.root);
    for (const MergeStep& step : plan.steps) {
        const std::vector<int> incoming =
            small_cycle(g.cells[static_cast<std::size_t>(g.idx(step.cell))]);
        merge_cycles(st, incoming, step.cell, step.anchor, inst);
    }

    for (int row = 0; row < g.K; ++row)
        for (int col = 0; col < g.K; ++col) {
            const CellIdx cell{row, col};
            if (g.is_dense(cell) || g.count(cell) == 0) continue;
            CellIdx anchor{-1, -1};
            std::size_t best = 0;
            for (CellIdx nb : g.star_neighbors(cell)) {
                if (!g.is_dense(nb)) continue;
                auto it = st.surviving.find(st.key(nb));
                if (it == st.surviving.end() || it->second.empty()) continue;
                if (it->second.size() > best ||
                    (it->second.size() == best && anchor.row >= 0 && nb < anchor)) {
                    best = it->second.size();
                    anchor = nb;
                }
            }
            if (best == 0) throw std::logic_error("occupied sparse tile has no usable anchor");
            std::vector<int> nodes = g.cells[static_cast<std::size_t>(g.idx(cell))];
            std::sort(nodes.begin(), nodes.end());
            attach_path(st, nodes, anchor, inst);
        }

    BridgeStats stats = classify_edges(st, inst);
    stats.t_dense = static_cast<long long>(plan.steps.size()) + 1;
    return {std::move(st), stats};
}

// Fallback when H fails: merge each dense component separately, attach what
// sparse tiles can be anchored, then stitch the leftover pieces with
// nearest-endpoint splices. Always yields a Hamiltonian cycle for n >= 3;
// the bridge guarantees no longer apply.
inline std::pair<CycleState, BridgeStats> best_effort_completion(const Instance& inst,
                                                                 const GridState& g, int M_eff) {
    if (inst.n < 3)
        throw std::invalid_argument("need at least 3 nodes, got " + std::to_string(inst.n));

    {
        const EventReport rep = detect_events(g, M_eff);
        if (rep.H) {
            FResult f = detect_F(g, M_eff);
            const Backbone b = build_backbone(g, std::move(f.crossings));
            return construct_hamiltonian(inst, g, b);
        }
    }

    std::vector<CycleState> parts;
    long long merged_dense = 0;
    for (int comp = 0; comp < g.component_count; ++comp) {
        const MergePlan plan = plan_component_merge(g, comp);
        CycleState st = init_cycle(g, plan.root);
        for (const MergeStep& step : plan.steps)
            merge_cycles(st, small_cycle(g.cells[static_cast<std::size_t>(g.idx(step.cell))]),
                         step.cell, step.anchor, inst);
        merged_dense += static_cast<long long>(plan.steps.size()) + 1;
        parts.push_back(std::move(st));
    }

    std::vector<int> owner(static_cast<std::size_t>(g.K) * static_cast<std::size_t>(g.K), -1);
    for (int row = 0; row < g.K; ++row)
        for (int col = 0; col < g.K; ++col)
            owner[static_cast<std::size_t>(g.idx(row, col))] =
                g.component_id[static_cast<std::size_t>(g.idx(row, col))];

    std::vector<std::vector<int>> loose;  // occupied sparse tiles nobody can anchor
    for (int row = 0; row < g.K; ++row)
        for (int col = 0; col < g.K; ++col) {
            const CellIdx cell{row, col};
            if (g.is_dense(cell) || g.count(cell) == 0) continue;
            CellIdx anchor{-1, -1};
            std::size_t best = 0;
            int part = -1;
            for (CellIdx nb : g.star_neighbors(cell)) {
                if (!g.is_dense(nb)) continue;
                const int comp = owner[static_cast<std::size_t>(g.idx(nb))];
                auto it = parts[static_cast<std::size_t>(comp)].surviving.find(
                    parts[static_cast<std::size_t>(comp)].key(nb));
                if (it == parts[static_cast<std::size_t>(comp)].surviving.end() ||
                    it->second.empty())
                    continue;
                if (it->second.size() > best ||
                    (it->second.size() == best && anchor.row >= 0 && nb < anchor)) {
                    best = it->second.size();
                    anchor = nb;
                    part = comp;
                }
            }
            std::vector<int> nodes = g.cells[static_cast<std::size_t>(g.idx(cell))];
            std::sort(nodes.begin(), nodes.end());
            if (part >= 0)
                attach_path(parts[static_cast<std::size_t>(part)], nodes, anchor, inst);
            else
                loose.push_back(std::move(nodes));
        }

    // Stitch order: component cycles by descending size (ties by component
    // id), then loose paths in tile scan order.
    std::vector<std::size_t> cycle_order(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) cycle_order[i] = i;
    std::sort(cycle_order.begin(), cycle_order.end(), [&](std::size_t a, std::size_t b) {
        if (parts[a].order.size() != parts[b].order.size())
            return parts[a].order.size() > parts[b].order.size();
        return a < b;
    });

    const auto at = [&](int i) { return inst.points[static_cast<std::size_t>(i)]; };
    CycleState main;
    main.K = g.K;
    std::vector<std::vector<int>> paths;  // remaining open pieces
    bool main_closed = false;
    if (!parts.empty()) {
        main = std::move(parts[cycle_order[0]]);
        main_closed = true;
        for (std::size_t i = 1; i < cycle_order.size(); ++i) {
            CycleState& p = parts[cycle_order[i]];
            paths.push_back(std::move(p.order));  // opened between back and front
            main.surviving.merge(p.surviving);
            main.removed.merge(p.removed);
            main.added.insert(main.added.end(), p.added.begin(), p.added.end());
        }
    }
    for (std::vector<int>& nodes : loose) paths.push_back(std::move(nodes));

    std::size_t start = 0;
    if (!main_closed) {
        if (paths.empty()) throw std::logic_error("no nodes to stitch");
        main.order = std::move(paths[0]);
        start = 1;
    }

    for (std::size_t pi = start; pi < paths.size(); ++pi) {
        const std::vector<int>& piece = paths[pi];
        const int pf = piece.front(), pb = piece.back();
        if (main_closed) {
            // Replace one cycle edge (x, succ) with x -> piece -> succ, at the
            // position and orientation minimizing the longer new edge.
            const std::size_t m = main.order.size();
            std::size_t best_i = 0;
            bool best_fwd = true;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const Point x = at(main.order[i]);
                const Point s = at(main.order[(i + 1) % m]);
                const double fwd = std::max(dist(x, at(pf)), dist(at(pb), s));
                const double rev = std::max(dist(x, at(pb)), dist(at(pf), s));
                if (fwd < best_cost) {
                    best_cost = fwd;
                    best_i = i;
                    best_fwd = true;
                }
                if (rev < best_cost) {
                    best_cost = rev;
                    best_i = i;
                    best_fwd = false;
                }
            }
            std::vector<int> next;
            next.reserve(m + piece.size());
            for (std::size_t i = 0; i <= best_i; ++i) next.push_back(main.order[i]);
            if (best_fwd)
                next.insert(next.end(), piece.begin(), piece.end());
            else
                next.insert(next.end(), piece.rbegin(), piece.rend());
            for (std::size_t i = best_i + 1; i < m; ++i) next.push_back(main.order[i]);
            const int x = main.order[best_i], s = main.order[(best_i + 1) % m];
            const int first = best_fwd ? pf : pb, last = best_fwd ? pb : pf;
            main.added.push_back({x, first, dist(at(x), at(first))});
            main.added.push_back({last, s, dist(at(last), at(s))});
            main.order = std::move(next);
        } else {
            const int tail = main.order.back();
            const bool fwd = dist(at(tail), at(pf)) <= dist(at(tail), at(pb));
            const int first = fwd ? pf : pb;
            main.added.push_back({tail, first, dist(at(tail), at(first))});
            if (fwd)
                main.order.insert(main.order.end(), piece.begin(), piece.end());
            else
                main.order.insert(main.order.end(), piece.rbegin(), piece.rend());
        }
    }
    if (!main_closed) {
        main.added.push_back(
            {main.order.back(), main.order.front(), dist(at(main.order.back()), at(main.order.front()))});
    }

    BridgeStats stats = classify_edges(main, inst);
    stats.t_dense = merged_dense;
    return {std::move(main), stats};
}

}  // namespace bhc
