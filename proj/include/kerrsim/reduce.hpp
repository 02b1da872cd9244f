#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kerrsim {

// Fixed pairwise-tree summation. The tree shape depends only on the length,
// so sums are bit-reproducible no matter how the producing loop was
// parallelised. Shared contract between the moment estimators and stats.
template <class T>
T pairwise_sum(std::span<const T> v) {
    const std::size_t n = v.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = v[0];
        for (std::size_t i = 1; i < n; ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

} // namespace kerrsim
