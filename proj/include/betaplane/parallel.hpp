#pragma once

#include <cstddef>
#include <functional>

namespace betaplane {

/// Resolves a worker count: explicit > 0 wins, otherwise BETAPLANE_THREADS,
/// otherwise 1.
int resolve_jobs(int requested);

/// Calls body(i) for every i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace betaplane
