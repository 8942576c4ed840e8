#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bhc {

// Model inputs. n nodes in the unit square, connection radius derived from
// (alpha, omega, eps1), L = density threshold per tile, M = requested
// rectangle width in tiles, [eps1, eps2] = bounds of the sampling density.
struct ModelParams {
    long long n = 0;
    int L = 9;
    double alpha = 0.0;
    double omega = 0.0;
    double eps1 = 1.0;
    double eps2 = 1.0;
    int M = 4;

    void validate() const {
        if (n < 2)
            throw std::invalid_argument("n must be >= 2, got " + std::to_string(n));
        if (L < 9)
            throw std::invalid_argument("L must be >= 9, got " + std::to_string(L));
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha must be finite and >= 0");
        if (!(omega >= 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("omega must be finite and >= 0");
        if (!(eps1 > 0.0) || !(eps1 <= 1.0))
            throw std::invalid_argument("eps1 must lie in (0, 1]");
        if (!(eps2 >= eps1) || !std::isfinite(eps2))
            throw std::invalid_argument("eps2 must be finite and >= eps1");
        if (M < 1)
            throw std::invalid_argument("M must be >= 1, got " + std::to_string(M));
    }
};

inline double log_log(long long n) { return std::log(std::log(static_cast<double>(n))); }

// theta = (log n + alpha log log n + omega) / eps1, the expected node count
// scale per radius-area; must be positive for the model to make sense.
inline double theta(const ModelParams& p) {
    const double num = std::log(static_cast<double>(p.n)) + p.alpha * log_log(p.n) + p.omega;
    if (!(num > 0.0))
        throw std::invalid_argument("log n + alpha log log n + omega must be positive");
    return num / p.eps1;
}

// Connection radius r_n = sqrt(theta / (4 n)).
inline double radius(const ModelParams& p) {
    p.validate();
    return std::sqrt(theta(p) / (4.0 * static_cast<double>(p.n)));
}

// Square tiling of S into K x K tiles of side 1/K. K is the least integer
// with 8 n / K^2 strictly below theta, which guarantees t_n * sqrt(2) < r_n:
// a tile's diagonal is shorter than the connection radius, so nodes in
// star-adjacent tiles are always connected.
struct TilingSpec {
    int K = 1;
    double t_n = 1.0;      // 1.0 / K, for reporting; grid math uses K directly
    double theta_n = 0.0;
    double gamma_n = 0.0;  // theta_n - 8 n / K^2, slack of the strict inequality
    double r_n = 0.0;
    bool gamma_flagged = false;  // gamma_n >= 1: tiling is coarser than necessary
};

inline bool tile_count_ok(long long n, int K, double theta_n) {
    return 8.0 * static_cast<double>(n) / (static_cast<double>(K) * static_cast<double>(K)) <
           theta_n;
}

inline TilingSpec tile_side(const ModelParams& p) {
    p.validate();
    const double th = theta(p);
    int K = static_cast<int>(std::floor(std::sqrt(8.0 * static_cast<double>(p.n) / th)));
    if (K < 1) K = 1;
    while (!tile_count_ok(p.n, K, th)) ++K;
    while (K > 1 && tile_count_ok(p.n, K - 1, th)) --K;

    TilingSpec spec;
    spec.K = K;
    spec.t_n = 1.0 / static_cast<double>(K);
    spec.theta_n = th;
    spec.gamma_n =
        th - 8.0 * static_cast<double>(p.n) / (static_cast<double>(K) * static_cast<double>(K));
    spec.r_n = std::sqrt(th / (4.0 * static_cast<double>(p.n)));
    spec.gamma_flagged = spec.gamma_n >= 1.0;
    return spec;
}

// Bridge fraction budget 16 / (L - 8), capped at 1 since a fraction of
// edges cannot exceed 1. The cap binds for L < 24.
struct BridgeBudget {
    double raw = 0.0;
    double effective = 0.0;
};

inline BridgeBudget bridge_budget(int L) {
    if (L < 9) throw std::invalid_argument("L must be >= 9, got " + std::to_string(L));
    BridgeBudget b;
    b.raw = 16.0 / static_cast<double>(L - 8);
    b.effective = b.raw < 1.0 ? b.raw : 1.0;
    return b;
}

// Effective rectangle width: the smallest divisor of K that is >= M, so the
// K x K grid splits exactly into K / M_eff rectangles per orientation.
// M beyond K (possible at small n, where K is tiny) falls back to K itself.
inline int rect_width(int M, int K) {
    if (M < 1) throw std::invalid_argument("M must be >= 1, got " + std::to_string(M));
    if (K < 1) throw std::invalid_argument("K must be >= 1, got " + std::to_string(K));
    for (int d = M; d < K; ++d)
        if (K % d == 0) return d;
    return K;
}

// Named parameter sets. "theorem" satisfies alpha = 8L - 1, the regime with
// a proven high-probability guarantee; "practical" is a lighter set whose
// grid is fine enough to exercise sparse tiles while H still usually holds.
inline ModelParams preset(std::string_view name) {
    ModelParams p;
    if (name == "theorem") {
        p.n = 10000;
        p.L = 40;
        p.alpha = 319.0;
        p.omega = 5.0;
    } else if (name == "practical") {
        p.n = 10000;
        p.L = 9;
        p.alpha = 20.0;
        p.omega = 55.0;
    } else {
        throw std::invalid_argument("unknown preset: " + std::string(name));
    }
    return p;
}

}  // namespace bhc
