#pragma once

#include <cstddef>
#include <functional>

namespace pfloc {

/// Caps the number of worker threads used by Monte Carlo loops. 0 restores
/// the default (hardware concurrency).
void set_thread_limit(std::size_t threads) noexcept;
[[nodiscard]] std::size_t thread_limit() noexcept;

/**
 * Runs `body(i)` for every i in [0, count). Work items are claimed
 * dynamically, so callers must write results into index-addressed slots to
 * stay independent of scheduling. The first exception thrown by any item is
 * rethrown after all workers join.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace pfloc
