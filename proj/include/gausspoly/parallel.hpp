#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gausspoly {

/// Worker count: GAUSSPOLY_THREADS if set and positive, otherwise the
/// hardware concurrency (0 in the variable also means auto).
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is visited exactly once; the body must only write to state owned by
/// its index. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Fixed-shape pairwise summation; the result depends only on the values and
/// their order.
double pairwise_sum(std::span<const double> values);

}  // namespace gausspoly
