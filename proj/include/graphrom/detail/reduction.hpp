#pragma once

#include <cstddef>
#include <span>

namespace graphrom::detail {

// Pairwise-tree summation over a fixed-order buffer. The reduction tree depends
// only on the element count, so results are bit-identical across runs and
// independent of any outer parallelism.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

} // namespace graphrom::detail
