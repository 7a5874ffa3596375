#pragma once

#include <cstddef>
#include <functional>

namespace ptcs {

/// Worker count: PTCS_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() threads.  The first
/// exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ptcs
