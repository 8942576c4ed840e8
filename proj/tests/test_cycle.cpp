#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include <bhc/backbone.hpp>
#include <bhc/cycle.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bhc;
using Catch::Approx;

namespace {

bool is_simple_cycle_over(const std::vector<int>& order, const std::set<int>& nodes) {
    if (order.size() != nodes.size()) return false;
    std::set<int> seen(order.begin(), order.end());
    return seen == nodes;
}

}  // namespace

TEST_CASE("small_cycle sorts and rejects undersized input") {
    CHECK(small_cycle({5, 2, 9}) == std::vector<int>{2, 5, 9});
    CHECK(small_cycle({3, 1, 2, 7, 4}) == std::vector<int>{1, 2, 3, 4, 7});
    CHECK_THROWS_AS(small_cycle({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(small_cycle({}), std::invalid_argument);
}

TEST_CASE("merge splices two triangles the hand-checked way") {
    // nodes 1,2,3 in the lower tile, 4,5,6 in the tile above; index 0 unused
    std::vector<Point> pts = {
        {-0.4, -0.4},                                      // 0: dummy
        {0.0, 0.0},   {0.01, 0.0},   {0.005, 0.01},        // 1,2,3
        {0.0, 0.05},  {0.01, 0.05},  {0.005, 0.06},        // 4,5,6
    };
    const Instance inst = fixtures::instance_of(std::move(pts), 0.5);

    CycleState st;
    st.K = 16;
    st.order = {1, 2, 3};
    const CellIdx anchor{8, 8}, cell{9, 8};
    st.surviving[st.key(anchor)] = {{1, 2}, {1, 3}, {2, 3}};
    st.removed[st.key(anchor)] = 0;

    merge_cycles(st, {4, 5, 6}, cell, anchor, inst);

    // removed (1,2) and (4,5); added (1,4) + (2,5); cycle 1-4-6-5-2-3-1
    CHECK(st.order == std::vector<int>{2, 3, 1, 4, 6, 5});
    CHECK(st.surviving.at(st.key(anchor)) ==
          std::set<std::pair<int, int>>{{1, 3}, {2, 3}});
    CHECK(st.removed.at(st.key(anchor)) == 1);
    CHECK(st.surviving.at(st.key(cell)) == std::set<std::pair<int, int>>{{4, 6}, {5, 6}});
    CHECK(st.removed.at(st.key(cell)) == 1);
    REQUIRE(st.added.size() == 2);
    CHECK(st.added[0].u == 1);
    CHECK(st.added[0].v == 4);
    CHECK(st.added[1].u == 2);
    CHECK(st.added[1].v == 5);
    CHECK(st.added[0].length == Approx(0.05));
}

TEST_CASE("merge preserves nodes and edge arithmetic on random cycles") {
    oracle::TestRng rng(99);
    for (int it = 0; it < 300; ++it) {
        const int m1 = 3 + static_cast<int>(rng.below(5));
        const int m2 = 3 + static_cast<int>(rng.below(5));
        std::vector<Point> pts;
        for (int i = 0; i < m1 + m2; ++i)
            pts.push_back({-0.3 + 0.5 * rng.uniform01(), -0.3 + 0.5 * rng.uniform01()});
        const Instance inst = fixtures::instance_of(std::move(pts), 0.4);

        std::vector<int> first, second;
        for (int i = 0; i < m1; ++i) first.push_back(i);
        for (int i = m1; i < m1 + m2; ++i) second.push_back(i);

        CycleState st;
        st.K = 4;
        st.order = small_cycle(first);
        const CellIdx anchor{1, 1}, cell{1, 2};
        std::set<std::pair<int, int>> edges;
        for (int i = 0; i < m1; ++i)
            edges.insert(norm_edge(st.order[static_cast<std::size_t>(i)],
                                   st.order[static_cast<std::size_t>((i + 1) % m1)]));
        st.surviving[st.key(anchor)] = edges;
        st.removed[st.key(anchor)] = 0;

        merge_cycles(st, small_cycle(second), cell, anchor, inst);

        std::set<int> all;
        for (int i = 0; i < m1 + m2; ++i) all.insert(i);
        CHECK(is_simple_cycle_over(st.order, all));
        CHECK(st.order.size() == static_cast<std::size_t>(m1 + m2));
        CHECK(st.added.size() == 2);
        CHECK(st.surviving.at(st.key(cell)).size() == static_cast<std::size_t>(m2 - 1));

        // the chosen pairing's longer edge is no longer than the alternative's
        const double got = std::max(st.added[0].length, st.added[1].length);
        const auto at = [&](int i) { return inst.points[static_cast<std::size_t>(i)]; };
        const int u = st.added[0].u, a = st.added[0].v, v = st.added[1].u, b = st.added[1].v;
        const double other = std::max(dist(at(u), at(b)), dist(at(v), at(a)));
        CHECK(got <= other + 1e-15);
    }
}

TEST_CASE("merge requires a surviving anchor edge") {
    const Instance inst = fixtures::instance_of(
        {{0.0, 0.0}, {0.01, 0.0}, {0.0, 0.01}, {0.1, 0.1}, {0.11, 0.1}, {0.1, 0.11}}, 0.5);
    CycleState st;
    st.K = 4;
    st.order = {0, 1, 2};
    st.surviving[st.key({0, 0})] = {};
    CHECK_THROWS_AS(merge_cycles(st, {3, 4, 5}, {0, 1}, {0, 0}, inst), std::logic_error);
    CHECK_THROWS_AS(merge_cycles(st, {3, 4, 5}, {0, 1}, {1, 1}, inst), std::logic_error);
}

TEST_CASE("attach_path grows the cycle by the path length") {
    // 9-cycle in one tile, then paths of 1 and 3 nodes
    std::vector<Point> pts;
    fixtures::fill_cell(pts, 0, 0, 4, 9);
    pts.push_back({0.3, 0.3});
    pts.push_back({0.3, 0.32});
    pts.push_back({0.31, 0.3});
    pts.push_back({0.32, 0.33});
    const Instance inst = fixtures::instance_of(std::move(pts), 0.5);

    CycleState st;
    st.K = 4;
    std::vector<int> base;
    for (int i = 0; i < 9; ++i) base.push_back(i);
    st.order = small_cycle(base);
    const CellIdx anchor{0, 0};
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < 9; ++i) edges.insert(norm_edge(i, (i + 1) % 9));
    st.surviving[st.key(anchor)] = edges;
    st.removed[st.key(anchor)] = 0;

    attach_path(st, {9}, anchor, inst);
    CHECK(st.order.size() == 10);  // 10-edge cycle
    CHECK(st.removed.at(st.key(anchor)) == 1);
    CHECK(st.added.size() == 2);

    attach_path(st, {10, 11, 12}, anchor, inst);
    CHECK(st.order.size() == 13);
    CHECK(st.removed.at(st.key(anchor)) == 2);
    CHECK(st.added.size() == 4);

    std::set<int> all;
    for (int i = 0; i < 13; ++i) all.insert(i);
    CHECK(is_simple_cycle_over(st.order, all));

    CHECK_THROWS_AS(attach_path(st, {}, anchor, inst), std::invalid_argument);
}

TEST_CASE("merge plan: BFS from the backbone root with valid anchors") {
    std::vector<std::vector<int>> pattern(4, std::vector<int>(4, 1));
    const GridState g = fixtures::grid_from_pattern(pattern);
    FResult f = detect_F(g, 2);
    REQUIRE(f.ok);
    const Backbone b = build_backbone(g, std::move(f.crossings));
    const MergePlan plan = merge_order(g, b);

    CHECK(plan.root == b.cells.front());
    CHECK(plan.steps.size() == 15);  // 16 dense tiles, one is the root

    std::set<std::pair<int, int>> visited{{plan.root.row, plan.root.col}};
    for (const MergeStep& s : plan.steps) {
        // anchor already merged and star-adjacent to the new tile
        CHECK(visited.count({s.anchor.row, s.anchor.col}) == 1);
        CHECK(adjacent(s.cell, s.anchor, AdjMode::star));
        CHECK(visited.insert({s.cell.row, s.cell.col}).second);
    }
    CHECK(visited.size() == 16);

    // single dense tile -> empty plan
    const GridState g1 = fixtures::grid_from_pattern({{1, 0}, {0, 0}});
    const MergePlan p1 = plan_component_merge(g1, 0);
    CHECK(p1.root == CellIdx{0, 0});
    CHECK(p1.steps.empty());

    // two adjacent dense tiles -> one step anchored at the root
    const GridState g2 = fixtures::grid_from_pattern({{1, 1}, {0, 0}});
    const MergePlan p2 = plan_component_merge(g2, 0);
    REQUIRE(p2.steps.size() == 1);
    CHECK(p2.steps[0].cell == CellIdx{0, 1});
    CHECK(p2.steps[0].anchor == CellIdx{0, 0});
}

TEST_CASE("construct_hamiltonian on a fully dense grid") {
    const int K = 3, L = 9, per_cell = 12;
    std::vector<Point> pts;
    for (int row = 0; row < K; ++row)
        for (int col = 0; col < K; ++col) fixtures::fill_cell(pts, row, col, K, per_cell);
    bhc::TilingSpec ts = fixtures::spec_of(K);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, L);
    REQUIRE(g.component_count == 1);
    FResult f = detect_F(g, 3);
    REQUIRE(f.ok);
    const Backbone b = build_backbone(g, std::move(f.crossings));

    const auto [cycle, stats] = construct_hamiltonian(inst, g, b);
    CHECK(stats.t_dense == 9);
    CHECK(stats.n_edges == inst.n);

    const Verdict v = validate(cycle, inst, stats, 2.0 * inst.r_n, 1.0);
    CAPTURE(v.reasons);
    CHECK(v.ok);

    // ledger budget: every tile keeps >= L - 8 edges, loses <= 8
    for (const auto& [cell, cnt] : cycle.removed) {
        CHECK(cnt <= 8);
        CHECK(cycle.surviving.at(cell).size() >= static_cast<std::size_t>(L - 8));
    }
    // every added cross edge joins star-adjacent tiles
    for (const auto& e : cycle.added) CHECK(e.length < 2.0 * std::sqrt(2.0) * ts.t_n);
}

TEST_CASE("construct_hamiltonian attaches occupied sparse tiles") {
    const int K = 3, L = 9;
    std::vector<Point> pts;
    for (int row = 0; row < K; ++row)
        for (int col = 0; col < K; ++col)
            if (row != 1 || col != 1) fixtures::fill_cell(pts, row, col, K, L);
    fixtures::fill_cell(pts, 1, 1, K, 4);  // occupied sparse tile
    bhc::TilingSpec ts = fixtures::spec_of(K);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, L);
    FResult f = detect_F(g, 3);
    REQUIRE(f.ok);
    const Backbone b = build_backbone(g, std::move(f.crossings));
    const EventReport rep = detect_events(g, 3);
    REQUIRE(rep.H);

    const auto [cycle, stats] = construct_hamiltonian(inst, g, b);
    CHECK(stats.t_dense == 8);
    const Verdict v = validate(cycle, inst, stats, 2.0 * inst.r_n, 1.0);
    CAPTURE(v.reasons);
    CHECK(v.ok);
}

TEST_CASE("construct_hamiltonian enforces preconditions") {
    // extra dense component violates H
    const GridState g = fixtures::grid_from_pattern({
        {1, 1, 1, 1, 1, 1},
        {1, 0, 0, 0, 0, 1},
        {1, 0, 0, 0, 0, 1},
        {1, 0, 0, 1, 0, 1},
        {1, 0, 0, 0, 0, 1},
        {1, 1, 1, 1, 1, 1},
    });
    // rebuild the instance grid_from_pattern used: dense tiles in scan order
    std::vector<Point> pts;
    for (int row = 0; row < 6; ++row)
        for (int col = 0; col < 6; ++col)
            if (g.is_dense({row, col})) fixtures::fill_cell(pts, row, col, 6, 9);
    const Instance inst = fixtures::instance_of(std::move(pts), fixtures::spec_of(6).r_n);
    FResult f = detect_F(g, 3);
    REQUIRE(f.ok);
    const Backbone b = build_backbone(g, std::move(f.crossings));
    CHECK_THROWS_AS(construct_hamiltonian(inst, g, b), std::invalid_argument);
}

TEST_CASE("K=1 degenerate: the small cycle is the answer") {
    const int n = 11;
    std::vector<Point> pts;
    fixtures::fill_cell(pts, 0, 0, 1, n);
    bhc::TilingSpec ts = fixtures::spec_of(1);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, 9);
    FResult f = detect_F(g, 1);
    REQUIRE(f.ok);
    const Backbone b = build_backbone(g, std::move(f.crossings));
    const auto [cycle, stats] = construct_hamiltonian(inst, g, b);

    std::vector<int> expect;
    for (int i = 0; i < n; ++i) expect.push_back(i);
    CHECK(cycle.order == expect);
    CHECK(stats.n_br == 0);
    CHECK(stats.t_dense == 1);
}

TEST_CASE("classify_edges counts bridges against r_n") {
    // square of side 0.3 with one node pulled far away
    const Instance inst =
        fixtures::instance_of({{0.0, 0.0}, {0.03, 0.0}, {0.03, 0.03}, {-0.45, -0.45}}, 0.1);
    CycleState st;
    st.K = 1;
    st.order = {0, 1, 2, 3};
    const BridgeStats s = classify_edges(st, inst);
    CHECK(s.n_edges == 4);
    CHECK(s.n_br == 2);  // the two edges touching node 3
    CHECK(s.max_edge == Approx(dist(inst.points[2], inst.points[3])));
    CHECK(s.gamma_actual == Approx(0.5));
}

TEST_CASE("validate rejects broken cycles") {
    const Instance inst = fixtures::instance_of(
        {{0.0, 0.0}, {0.05, 0.0}, {0.05, 0.05}, {0.0, 0.05}}, 0.2);

    CycleState good;
    good.K = 1;
    good.order = {0, 1, 2, 3};
    const BridgeStats stats = classify_edges(good, inst);
    CHECK(validate(good, inst, stats, std::sqrt(2.0) * 1.001, 1.0).ok);
    CHECK(validate(good, inst, stats, 0.2, 1.0).ok);

    // max edge not strictly below width
    CHECK_FALSE(validate(good, inst, stats, stats.max_edge, 1.0).ok);

    // bridge fraction over budget: r_n = 0.1 makes half the edges bridges
    const Instance far = fixtures::instance_of(
        {{0.0, 0.0}, {0.03, 0.0}, {0.03, 0.03}, {-0.45, -0.45}}, 0.1);
    CycleState bridged;
    bridged.K = 1;
    bridged.order = {0, 1, 2, 3};
    const BridgeStats bs = classify_edges(bridged, far);
    REQUIRE(bs.n_br == 2);
    CHECK(validate(bridged, far, bs, 2.0, 0.5).ok);
    CHECK_FALSE(validate(bridged, far, bs, 2.0, 0.49).ok);

    CycleState dup = good;
    dup.order = {0, 1, 2, 2};
    Verdict v = validate(dup, inst, classify_edges(dup, inst), 1.0, 1.0);
    CHECK_FALSE(v.ok);
    REQUIRE_FALSE(v.reasons.empty());
    CHECK(v.reasons[0].find("not Hamiltonian") != std::string::npos);

    CycleState missing = good;
    missing.order = {0, 1, 2};
    v = validate(missing, inst, classify_edges(missing, inst), 1.0, 1.0);
    CHECK_FALSE(v.ok);
    CHECK(v.reasons[0].find("not Hamiltonian") != std::string::npos);

    CycleState bad_stats = good;
    BridgeStats wrong = stats;
    wrong.n_br += 1;
    v = validate(bad_stats, inst, wrong, 1.0, 1.0);
    CHECK_FALSE(v.ok);
}

TEST_CASE("best_effort stitches far-apart dense clusters") {
    // two dense tiles at opposite corners, sparse moat between
    const int K = 5, L = 9;
    std::vector<Point> pts;
    fixtures::fill_cell(pts, 0, 0, K, L);
    fixtures::fill_cell(pts, 4, 4, K, L);
    bhc::TilingSpec ts = fixtures::spec_of(K);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, L);
    REQUIRE(g.component_count == 2);
    REQUIRE_FALSE(detect_events(g, 5).H);

    const auto [cycle, stats] = best_effort_completion(inst, g, 5);
    const Verdict v = validate(cycle, inst, stats,
                               std::numeric_limits<double>::infinity(), 1.0);
    CAPTURE(v.reasons);
    CHECK(v.ok);
    CHECK(stats.max_edge > 2.0 * ts.r_n);  // the stitch bridges are long

    long long longer = 0;
    const std::size_t m = cycle.order.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double len = dist(inst.points[static_cast<std::size_t>(cycle.order[i])],
                                inst.points[static_cast<std::size_t>(cycle.order[(i + 1) % m])]);
        if (len > 2.0 * ts.r_n) ++longer;
    }
    CHECK(longer == 2);  // exactly the two stitch edges
}

TEST_CASE("best_effort handles all-sparse instances") {
    const int K = 4, L = 9;
    std::vector<Point> pts;
    fixtures::fill_cell(pts, 0, 0, K, 2);
    fixtures::fill_cell(pts, 1, 2, K, 3);
    fixtures::fill_cell(pts, 3, 3, K, 2);
    bhc::TilingSpec ts = fixtures::spec_of(K);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, L);
    REQUIRE(g.component_count == 0);

    const auto [cycle, stats] = best_effort_completion(inst, g, 4);
    const Verdict v = validate(cycle, inst, stats,
                               std::numeric_limits<double>::infinity(), 1.0);
    CAPTURE(v.reasons);
    CHECK(v.ok);
    CHECK(stats.t_dense == 0);
}

TEST_CASE("best_effort falls through to the guaranteed construction under H") {
    const int K = 3, L = 9;
    std::vector<Point> pts;
    for (int row = 0; row < K; ++row)
        for (int col = 0; col < K; ++col) fixtures::fill_cell(pts, row, col, K, 10);
    bhc::TilingSpec ts = fixtures::spec_of(K);
    const Instance inst = fixtures::instance_of(std::move(pts), ts.r_n);
    const GridState g = build_grid(inst, ts, L);
    REQUIRE(detect_events(g, 3).H);

    FResult f = detect_F(g, 3);
    const Backbone b = build_backbone(g, std::move(f.crossings));
    const auto [direct, direct_stats] = construct_hamiltonian(inst, g, b);
    const auto [fallback, fallback_stats] = best_effort_completion(inst, g, 3);
    CHECK(direct.order == fallback.order);
    CHECK(direct_stats.n_br == fallback_stats.n_br);
    CHECK(direct_stats.max_edge == fallback_stats.max_edge);
}

TEST_CASE("best_effort rejects n < 3") {
    const Instance inst = fixtures::instance_of({{0.0, 0.0}, {0.1, 0.1}}, 0.3);
    const GridState g = build_grid(inst, fixtures::spec_of(2), 9);
    CHECK_THROWS_AS(best_effort_completion(inst, g, 2), std::invalid_argument);
}
