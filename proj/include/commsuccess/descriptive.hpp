#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "commsuccess/success.hpp"  // sample_median

namespace commsuccess {

inline double mean(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

// Population standard deviation (divide by n).
inline double population_std(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

inline double median_of(std::span<const double> x) {
    return sample_median(std::vector<double>(x.begin(), x.end()));
}

}  // namespace commsuccess
