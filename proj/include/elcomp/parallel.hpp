#pragma once

#include <cstddef>
#include <functional>

namespace elcomp {

/// Worker count: ELCOMP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// writes only its own outputs, so results do not depend on scheduling. The
/// exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace elcomp
