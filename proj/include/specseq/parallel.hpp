#pragma once

#include <cstddef>
#include <functional>

namespace specseq {

/// Worker count: SPECSEQ_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned thread_budget();

/// Runs body(0..n-1) across up to thread_budget() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace specseq
