#pragma once

#include <span>
#include <vector>

namespace pfloc {

/// Neumaier-compensated sum; result depends only on element order.
[[nodiscard]] double compensated_sum(std::span<const double> values) noexcept;

/**
 * Empirical quantile of level `prob` in [0, 1] using order statistics with
 * linear interpolation (h = (n - 1) * prob; the "type 7" rule).
 * `sorted` must be ascending and non-empty.
 */
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double prob);

/// Copies, sorts, and evaluates `quantile_sorted`.
[[nodiscard]] double quantile(std::span<const double> values, double prob);

[[nodiscard]] double median(std::span<const double> values);

/// Median absolute deviation around the median (unscaled).
[[nodiscard]] double median_abs_deviation(std::span<const double> values);

}  // namespace pfloc
