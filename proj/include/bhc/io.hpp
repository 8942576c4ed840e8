#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "backbone.hpp"
#include "cycle.hpp"
#include "experiment.hpp"
#include "grid.hpp"
#include "params.hpp"

namespace bhc {

using json = nlohmann::json;

// Derived model quantities for one parameter set, as printed by `params`.
inline json params_to_json(const ModelParams& p) {
    p.validate();
    const TilingSpec ts = tile_side(p);
    const BridgeBudget budget = bridge_budget(p.L);
    const int M_eff = rect_width(p.M, ts.K);
    return json{{"n", p.n},
                {"alpha", p.alpha},
                {"omega", p.omega},
                {"eps1", p.eps1},
                {"L", p.L},
                {"M_eff", M_eff},
                {"r_n", ts.r_n},
                {"K", ts.K},
                {"t_n", ts.t_n},
                {"gamma_n", ts.gamma_n},
                {"theta_n", ts.theta_n},
                {"budget_raw", budget.raw},
                {"budget_effective", budget.effective}};
}

// Grid snapshot. K x K arrays are row-major with row 0 at the bottom of the
// square; components holds the dense component id per tile, -1 if sparse.
inline json grid_to_json(const GridState& g, const Backbone* b = nullptr) {
    json counts = json::array(), dense = json::array(), comps = json::array();
    for (int row = 0; row < g.K; ++row) {
        json crow = json::array(), drow = json::array(), prow = json::array();
        for (int col = 0; col < g.K; ++col) {
            crow.push_back(g.count({row, col}));
            drow.push_back(g.is_dense({row, col}));
            prow.push_back(g.component_id[static_cast<std::size_t>(g.idx(row, col))]);
        }
        counts.push_back(std::move(crow));
        dense.push_back(std::move(drow));
        comps.push_back(std::move(prow));
    }
    json cells = json::array();
    if (b)
        for (CellIdx c : b->cells) cells.push_back(json::array({c.row, c.col}));
    return json{{"K", g.K},           {"L", g.L},
                {"counts", counts},   {"dense", dense},
                {"components", comps}, {"backbone_cells", cells}};
}

inline json cycle_to_json(const CycleState& st, const Instance& inst, const BridgeStats& stats) {
    json edges = json::array();
    const std::size_t m = st.order.size();
    for (std::size_t i = 0; i < m; ++i) {
        const int a = st.order[i], b = st.order[(i + 1) % m];
        const double len =
            dist(inst.points[static_cast<std::size_t>(a)], inst.points[static_cast<std::size_t>(b)]);
        edges.push_back(
            json{{"i", a}, {"j", b}, {"length", len}, {"is_bridge", len >= inst.r_n}});
    }
    return json{{"order", st.order},
                {"edges", edges},
                {"stats",
                 json{{"n_edges", stats.n_edges},
                      {"n_br", stats.n_br},
                      {"max_edge", stats.max_edge},
                      {"gamma_actual", stats.gamma_actual},
                      {"t_dense", stats.t_dense},
                      {"removed_max", stats.removed_max}}}};
}

inline json stats_to_json(const BridgeStats& s) {
    return json{{"n_edges", s.n_edges},   {"n_br", s.n_br},
                {"max_edge", s.max_edge}, {"gamma_actual", s.gamma_actual},
                {"t_dense", s.t_dense},   {"removed_max", s.removed_max}};
}

// include_runtime=false gives the byte-stable form used by determinism
// checks; everything else in the report is a pure function of the seed.
inline json trial_report_to_json(const TrialReport& r, bool include_runtime = true) {
    json j{{"seed", r.seed},
           {"n", r.n},
           {"L", r.L},
           {"alpha", r.alpha},
           {"omega", r.omega},
           {"eps1", r.eps1},
           {"M_eff", r.M_eff},
           {"r_n", r.r_n},
           {"K", r.K},
           {"t_n", r.t_n},
           {"gamma_n", r.gamma_n},
           {"events", json{{"F", r.F}, {"I", r.I}, {"J", r.J}, {"H", r.H}}},
           {"success", r.success},
           {"within_guarantee", r.within_guarantee},
           {"mode", mode_name(r.mode)},
           {"failure_reason", r.failure_reason}};
    j["stats"] = r.stats ? stats_to_json(*r.stats) : json(nullptr);
    if (include_runtime) j["runtime_ms"] = r.runtime_ms;
    return j;
}

inline json summary_to_json(const BatchSummary& s) {
    json agg(nullptr);
    if (s.successes > 0)
        agg = json{{"gamma_actual", json{{"mean", s.gamma_actual_mean}, {"max", s.gamma_actual_max}}},
                   {"max_edge_over_r_n",
                    json{{"mean", s.edge_ratio_mean}, {"max", s.edge_ratio_max}}},
                   {"t_dense", json{{"mean", s.t_dense_mean}, {"max", s.t_dense_max}}}};
    return json{{"trials", s.trials},
                {"mode", mode_name(s.mode)},
                {"successes", s.successes},
                {"rates",
                 json{{"F", s.rate_F},
                      {"I", s.rate_I},
                      {"J", s.rate_J},
                      {"H", s.rate_H},
                      {"success", s.rate_success}}},
                {"aggregates", agg}};
}

}  // namespace bhc
