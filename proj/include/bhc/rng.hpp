#pragma once

#include <cstdint>
#include <random>

namespace bhc {

// SplitMix64 step; used to spread raw seeds before feeding the main engine
// so that consecutive seeds (1, 2, 3, ...) do not start in correlated states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic uniform source. std::mt19937_64 output is fixed by the
// standard, and the [0,1) mapping below uses only exact float arithmetic,
// so streams are bit-identical across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(spread(seed)) {}

    std::uint64_t next_u64() { return eng_(); }

    // 53-bit mantissa in [0, 1); never returns 1.0.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t spread(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::mt19937_64 eng_;
};

}  // namespace bhc
