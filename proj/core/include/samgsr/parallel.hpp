#pragma once

#include <cstddef>
#include <functional>

namespace samgsr {

/// Worker count used by every parallel loop in the library. Initialised from
/// the SAMGSR_THREADS environment variable, else the hardware concurrency.
std::size_t default_threads();

/// Overrides the worker count process-wide; 0 restores the environment default.
void set_default_threads(std::size_t threads);

/// Runs body(i) for i in [0, count). Each index is visited exactly once, so
/// callers that write results by index get thread-count-invariant output.
/// Nested calls from inside a worker run serially. If any body throws, the
/// exception from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace samgsr
