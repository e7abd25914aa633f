#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace epifit {

// Percentile with linear interpolation between closest ranks (the common
// "type 7" definition). `pct` is in [0, 100].
inline double percentile(std::vector<double> values, double pct)
{
    if (values.empty()) {
        throw ArgumentError("percentile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double mean(const std::vector<double>& values)
{
    if (values.empty()) {
        throw ArgumentError("mean of an empty sample");
    }
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

} // namespace epifit
