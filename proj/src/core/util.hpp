#pragma once

#include <cstdint>
#include <future>
#include <utility>
#include <vector>

namespace rpt {

// Pairwise (tree) accumulation over the index range [lo, hi).
//
// The reduction tree depends only on the range and the leaf size, never on
// the thread count, so results are bit-for-bit reproducible.  T needs
// operator+= (Eigen matrices and scalars both qualify).
template <class T, class F>
T pairwise_accumulate(std::int64_t lo, std::int64_t hi, F&& f, std::int64_t leaf = 256) {
    if (hi - lo <= leaf) {
        T acc = f(lo);
        for (std::int64_t i = lo + 1; i < hi; ++i) acc += f(i);
        return acc;
    }
    const std::int64_t mid = lo + (hi - lo) / 2;
    T left = pairwise_accumulate<T>(lo, mid, f, leaf);
    left += pairwise_accumulate<T>(mid, hi, f, leaf);
    return left;
}

// Same tree as pairwise_accumulate, with the top levels of the recursion
// farmed out to std::async.  Identical result for any thread budget.
template <class T, class F>
T pairwise_accumulate_parallel(std::int64_t lo, std::int64_t hi, F&& f, int threads,
                               std::int64_t leaf = 256) {
    if (threads <= 1 || hi - lo <= leaf) return pairwise_accumulate<T>(lo, hi, f, leaf);
    const std::int64_t mid = lo + (hi - lo) / 2;
    auto right = std::async(std::launch::async, [&] {
        return pairwise_accumulate_parallel<T>(mid, hi, f, threads / 2, leaf);
    });
    T left = pairwise_accumulate_parallel<T>(lo, mid, f, threads - threads / 2, leaf);
    left += right.get();
    return left;
}

inline int popcount32(std::uint32_t x) {
    int c = 0;
    while (x) {
        x &= x - 1;
        ++c;
    }
    return c;
}

}  // namespace rpt
