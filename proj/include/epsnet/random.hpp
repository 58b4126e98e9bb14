#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace epsnet {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from a base seed and a path of labels,
/// so results do not depend on the order in which streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (auto p : path) h = mix(h ^ mix(p));
    return h;
}

/// k distinct draws from `pool`, in draw order (partial Fisher-Yates).
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t k, Rng& rng) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace epsnet
