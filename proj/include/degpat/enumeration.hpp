#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "degpat/core.hpp"

namespace degpat::detail {

// Colex enumeration of k-subsets of {0..n-1}. fn returns false to stop.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& fn) {
    if (k > n) return;
    std::vector<std::uint32_t> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        if (!fn(std::span<const std::uint32_t>(c))) return;
        std::size_t i = 0;
        while (i < k) {
            std::uint32_t limit = (i + 1 < k) ? c[i + 1] : static_cast<std::uint32_t>(n);
            if (c[i] + 1 < limit) break;
            ++i;
        }
        if (i == k) return;
        ++c[i];
        for (std::size_t j = 0; j < i; ++j) c[j] = static_cast<std::uint32_t>(j);
    }
}

struct VecHash {
    std::size_t operator()(const std::vector<VertexId>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (VertexId x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Saturating binomial for cost estimates.
inline double binomial_estimate(double n, std::uint32_t k) {
    if (n < k) return 0.0;
    double r = 1.0;
    for (std::uint32_t i = 0; i < k; ++i) {
        r *= (n - i) / (i + 1);
        if (r > 1e300) return 1e300;
    }
    return r;
}

} // namespace degpat::detail
