#pragma once

#include <cstddef>

namespace solitonlab {

// Deterministic pairwise reduction with fixed blocking. All quadrature in the
// library goes through this so sums are bit-reproducible independent of any
// internal parallelism and better conditioned than a running sum.
template <class F>
double pairwise_map_sum(std::size_t lo, std::size_t hi, const F& f) {
    const std::size_t n = hi - lo;
    if (n <= 64) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_map_sum(lo, mid, f) + pairwise_map_sum(mid, hi, f);
}

template <class F>
double pairwise_map_sum(std::size_t n, const F& f) {
    return pairwise_map_sum<F>(0, n, f);
}

inline double pairwise_sum(const double* x, std::size_t n) {
    return pairwise_map_sum(n, [x](std::size_t i) { return x[i]; });
}

} // namespace solitonlab
