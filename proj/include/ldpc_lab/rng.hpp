#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ldpc_lab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Keyed substream derivation: every consumer of randomness hashes the master
// seed with its own coordinates, so results do not depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return derive_seed(derive_seed(a, b), c);
}
inline std::uint64_t derive_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
    return derive_seed(derive_seed(a, b, c), d);
}

// Rejection-sampled bounded draw; bit-exact for a given engine state.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = g();
    } while (v >= limit);
    return v % n;
}

inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

// Uniform permutation of [0, n).
inline std::vector<std::uint32_t> random_permutation(std::size_t n, std::mt19937_64& g) {
    std::vector<std::uint32_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
    fisher_yates(p, g);
    return p;
}

}  // namespace ldpc_lab
