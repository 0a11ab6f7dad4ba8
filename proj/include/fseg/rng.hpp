#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fseg {

// std::mt19937_64 output is pinned by the standard; the std distributions are
// not. Everything that must be byte-stable across platforms draws through
// these helpers instead.
using Rng = std::mt19937_64;

inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
    // modulo bias is irrelevant at the sizes used here
    return n == 0 ? 0 : rng() % n;
}

template <typename T>
void fisher_yates(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// First k elements of a shuffled 0..n-1 index vector.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(bounded(rng, n - i));
        std::swap(idx[i], idx[j]);
    }
    if (k < idx.size()) idx.resize(k);
    return idx;
}

}  // namespace fseg
