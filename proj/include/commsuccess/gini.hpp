#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "commsuccess/errors.hpp"

namespace commsuccess {

// Gini coefficient of a nonnegative vector,
//   sum_i sum_j |x_i - x_j| / (2 n sum_i x_i),
// computed in O(n log n) via the sorted identity
//   sum_i sum_j |x_i - x_j| = 2 sum_i (2i - n - 1) x_(i)   (1-based, ascending).
// Range is [0, (n-1)/n]; the upper bound is attained iff exactly one element
// is nonzero. All-zero input is defined as 0 (perfect equality among zeros)
// with the degenerate flag set.
inline double gini(std::span<const double> x, bool* degenerate = nullptr) {
    if (x.empty()) throw ConfigError("gini: empty input");
    if (degenerate) *degenerate = false;
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double total = 0, weighted = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        total += sorted[i];
        weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    }
    if (total <= 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return weighted / (n * total);
}

}  // namespace commsuccess
