#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "backbone.hpp"
#include "cycle.hpp"
#include "density.hpp"
#include "grid.hpp"
#include "instance.hpp"
#include "params.hpp"

namespace bhc {

enum class TrialMode { strict, best_effort };

inline const char* mode_name(TrialMode m) {
    return m == TrialMode::strict ? "strict" : "best-effort";
}

// Outcome of one seeded trial. within_guarantee marks cycles built under H
// and validated against (2 r_n, bridge budget); best-effort cycles outside H
// are valid Hamiltonian cycles without that promise.
struct TrialReport {
    std::uint64_t seed = 0;
    long long n = 0;
    int L = 0;
    double alpha = 0.0;
    double omega = 0.0;
    double eps1 = 0.0;
    int M_eff = 0;
    double r_n = 0.0;
    int K = 0;
    double t_n = 0.0;
    double gamma_n = 0.0;
    bool F = false, I = false, J = false, H = false;
    bool success = false;
    bool within_guarantee = false;
    TrialMode mode = TrialMode::strict;
    std::optional<BridgeStats> stats;
    std::string failure_reason;
    double runtime_ms = 0.0;
};

// Full trial artifacts for rendering and export; run_batch keeps only the
// report.
struct TrialOutput {
    TrialReport report;
    std::optional<GridState> grid;
    std::optional<Backbone> backbone;
    std::optional<CycleState> cycle;
};

namespace detail {

inline std::string describe_h_failure(const EventReport& ev) {
    std::string out = "H does not hold:";
    if (!ev.F)
        out += " " + std::to_string(ev.f_failed.size()) + " rectangle(s) without a dense crossing;";
    if (ev.I) out += " " + std::to_string(ev.i_components.size()) + " dense component(s) off the backbone;";
    if (ev.J) out += " " + std::to_string(ev.j_cells.size()) + " tile(s) with an all-sparse neighborhood;";
    out.pop_back();
    return out;
}

}  // namespace detail

// Grid, events, and construction for an already-sampled instance.
inline TrialOutput run_trial_on(const ModelParams& p, const Instance& inst, TrialMode mode) {
    p.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const TilingSpec ts = tile_side(p);
    const int M_eff = rect_width(p.M, ts.K);
    const BridgeBudget budget = bridge_budget(p.L);

    TrialOutput out;
    TrialReport& rep = out.report;
    rep.seed = inst.seed;
    rep.n = p.n;
    rep.L = p.L;
    rep.alpha = p.alpha;
    rep.omega = p.omega;
    rep.eps1 = p.eps1;
    rep.M_eff = M_eff;
    rep.r_n = ts.r_n;
    rep.K = ts.K;
    rep.t_n = ts.t_n;
    rep.gamma_n = ts.gamma_n;
    rep.mode = mode;

    GridState g = build_grid(inst, ts, p.L);
    FResult fres = detect_F(g, M_eff);
    EventReport ev;
    ev.F = fres.ok;
    ev.f_failed = fres.failed;
    if (ev.F) {
        out.backbone = build_backbone(g, fres.crossings);
        auto [i, extra] = detect_I(g, *out.backbone);
        ev.I = i;
        ev.i_components = std::move(extra);
    }
    auto [j, jcells] = detect_J(g);
    ev.J = j;
    ev.j_cells = std::move(jcells);
    ev.H = ev.F && !ev.I && !ev.J;
    rep.F = ev.F;
    rep.I = ev.I;
    rep.J = ev.J;
    rep.H = ev.H;

    try {
        if (inst.n < 3) {
            rep.failure_reason = "fewer than 3 nodes; no cycle exists";
        } else if (ev.H) {
            auto [cycle, stats] = construct_hamiltonian(inst, g, *out.backbone);
            const Verdict v = validate(cycle, inst, stats, 2.0 * inst.r_n, budget.effective);
            rep.success = v.ok;
            rep.within_guarantee = v.ok;
            rep.stats = stats;
            out.cycle = std::move(cycle);
            if (!v.ok) {
                rep.failure_reason = "validation failed:";
                for (const std::string& r : v.reasons) rep.failure_reason += " " + r + ";";
                rep.failure_reason.pop_back();
            }
        } else if (mode == TrialMode::strict) {
            rep.failure_reason = detail::describe_h_failure(ev);
        } else {
            auto [cycle, stats] = best_effort_completion(inst, g, M_eff);
            const Verdict v = validate(cycle, inst, stats,
                                       std::numeric_limits<double>::infinity(), 1.0);
            rep.success = v.ok;
            rep.stats = stats;
            out.cycle = std::move(cycle);
            rep.failure_reason = detail::describe_h_failure(ev) + "; best-effort completion used";
        }
    } catch (const std::logic_error& e) {
        rep.success = false;
        rep.within_guarantee = false;
        rep.failure_reason = std::string("internal: ") + e.what();
    }

    out.grid = std::move(g);
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline TrialReport run_trial(const ModelParams& p, const Density& d, std::uint64_t seed,
                             TrialMode mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const Instance inst = sample_nodes(p, d, seed);
    TrialReport rep = run_trial_on(p, inst, mode).report;
    rep.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// Batch aggregates. Rates are over all trials; the mean/max aggregates are
// over successful trials only and are meaningless when successes == 0.
struct BatchSummary {
    long long trials = 0;
    TrialMode mode = TrialMode::strict;
    double rate_F = 0.0, rate_I = 0.0, rate_J = 0.0, rate_H = 0.0, rate_success = 0.0;
    long long successes = 0;
    double gamma_actual_mean = 0.0, gamma_actual_max = 0.0;
    double edge_ratio_mean = 0.0, edge_ratio_max = 0.0;  // max_edge / r_n
    double t_dense_mean = 0.0;
    long long t_dense_max = 0;
    std::vector<TrialReport> rows;
};

// Seeds base_seed + 0 ... base_seed + trials - 1. Workers pull trial indices
// from a shared counter; each row lands in its own slot, so the result is
// identical for any worker count. jobs <= 0 selects hardware concurrency.
inline BatchSummary run_batch(const ModelParams& p, const Density& d, long long trials,
                              std::uint64_t base_seed, TrialMode mode, int jobs = 1) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    p.validate();

    BatchSummary sum;
    sum.trials = trials;
    sum.mode = mode;
    sum.rows.resize(static_cast<std::size_t>(trials));

    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
    if (static_cast<long long>(workers) > trials) workers = static_cast<unsigned>(trials);

    if (workers <= 1) {
        for (long long i = 0; i < trials; ++i)
            sum.rows[static_cast<std::size_t>(i)] =
                run_trial(p, d, base_seed + static_cast<std::uint64_t>(i), mode);
    } else {
        std::atomic<long long> next{0};
        std::exception_ptr first_error;
        std::mutex err_mu;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const long long i = next.fetch_add(1);
                    if (i >= trials) return;
                    try {
                        sum.rows[static_cast<std::size_t>(i)] =
                            run_trial(p, d, base_seed + static_cast<std::uint64_t>(i), mode);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mu);
                        if (!first_error) first_error = std::current_exception();
                        next.store(trials);
                        return;
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    long long nF = 0, nI = 0, nJ = 0, nH = 0, nS = 0;
    double g_sum = 0.0, e_sum = 0.0, t_sum = 0.0;
    for (const TrialReport& r : sum.rows) {
        nF += r.F;
        nI += r.I;
        nJ += r.J;
        nH += r.H;
        if (r.success && r.stats) {
            ++nS;
            const double ratio = r.stats->max_edge / r.r_n;
            g_sum += r.stats->gamma_actual;
            e_sum += ratio;
            t_sum += static_cast<double>(r.stats->t_dense);
            if (r.stats->gamma_actual > sum.gamma_actual_max)
                sum.gamma_actual_max = r.stats->gamma_actual;
            if (ratio > sum.edge_ratio_max) sum.edge_ratio_max = ratio;
            if (r.stats->t_dense > sum.t_dense_max) sum.t_dense_max = r.stats->t_dense;
        }
    }
    const double T = static_cast<double>(trials);
    sum.rate_F = nF / T;
    sum.rate_I = nI / T;
    sum.rate_J = nJ / T;
    sum.rate_H = nH / T;
    sum.rate_success = nS / T;
    sum.successes = nS;
    if (nS > 0) {
        sum.gamma_actual_mean = g_sum / static_cast<double>(nS);
        sum.edge_ratio_mean = e_sum / static_cast<double>(nS);
        sum.t_dense_mean = t_sum / static_cast<double>(nS);
    }
    return sum;
}

// Analytic tail shape C (log n)^(L q) exp(-eps1 q n t_n^2) for the chance
// that q fixed tiles are all sparse. C is caller-supplied; the bound is a
// diagnostic to print beside empirical rates, not a verified constant.
inline double sparse_probability_bound(int q, const ModelParams& p, const TilingSpec& spec,
                                       double C) {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
    const double logn = std::log(static_cast<double>(p.n));
    const double n_t2 =
        static_cast<double>(p.n) / (static_cast<double>(spec.K) * static_cast<double>(spec.K));
    const double exponent = std::log(C) + static_cast<double>(p.L) * q * std::log(logn) -
                            p.eps1 * static_cast<double>(q) * n_t2;
    return std::exp(exponent);
}

inline double empirical_sparse_rate(const std::vector<GridState>& grids, CellIdx cell) {
    if (grids.empty()) throw std::invalid_argument("need at least one grid");
    long long sparse = 0;
    for (const GridState& g : grids) {
        if (g.K != grids.front().K) throw std::invalid_argument("grids must share K");
        if (!g.in_bounds(cell)) throw std::invalid_argument("cell out of bounds");
        if (!g.is_dense(cell)) ++sparse;
    }
    return static_cast<double>(sparse) / static_cast<double>(grids.size());
}

// Batch CSV, one row per trial in seed order. Booleans as 0/1, reals with 17
// significant digits; absent stats columns are zero.
inline const char* batch_csv_header() {
    return "seed,n,L,alpha,omega,eps1,M_eff,r_n,K,t_n,gamma_n,F,I,J,H,success,t_dense,n_br,"
           "max_edge,gamma_actual,runtime_ms";
}

inline void write_batch_csv(std::ostream& os, const std::vector<TrialReport>& rows) {
    os << batch_csv_header() << '\n';
    for (const TrialReport& r : rows) {
        os << r.seed << ',' << r.n << ',' << r.L << ',' << format_double(r.alpha) << ','
           << format_double(r.omega) << ',' << format_double(r.eps1) << ',' << r.M_eff << ','
           << format_double(r.r_n) << ',' << r.K << ',' << format_double(r.t_n) << ','
           << format_double(r.gamma_n) << ',' << int(r.F) << ',' << int(r.I) << ',' << int(r.J)
           << ',' << int(r.H) << ',' << int(r.success) << ',';
        if (r.stats)
            os << r.stats->t_dense << ',' << r.stats->n_br << ',' << format_double(r.stats->max_edge)
               << ',' << format_double(r.stats->gamma_actual) << ',';
        else
            os << "0,0,0,0,";
        os << format_double(r.runtime_ms) << '\n';
    }
}

}  // namespace bhc
