#include "pfloc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pfloc/errors.hpp"

namespace pfloc {

double compensated_sum(std::span<const double> values) noexcept {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw ParameterError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw ParameterError("quantile level outside [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> values, double prob) {
    std::vector<double> copy(values.begin(), values.end());
    std::sort(copy.begin(), copy.end());
    return quantile_sorted(copy, prob);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double median_abs_deviation(std::span<const double> values) {
    const double m = median(values);
    std::vector<double> dev;
    dev.reserve(values.size());
    for (double v : values) dev.push_back(std::abs(v - m));
    return median(dev);
}

}  // namespace pfloc
