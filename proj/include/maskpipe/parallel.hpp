#pragma once

#include <cstddef>
#include <functional>

namespace maskpipe {

// Worker count: min(hardware_concurrency, MASKPIPE_THREADS) when the env var
// is set, at least 1.
int effective_threads();

// Runs fn(i) for i in [0, n). Work is split by index, so callers that write
// results into pre-sized slots by index get bit-identical output regardless
// of thread count; any floating-point reduction must happen afterwards in a
// fixed order. Exceptions from workers are rethrown on the calling thread.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace maskpipe
