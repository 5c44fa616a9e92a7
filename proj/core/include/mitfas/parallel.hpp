#pragma once

#include <cstddef>
#include <functional>

namespace mitfas {

/// Worker count for a request of `requested` threads (0 = one per hardware
/// thread), capped by the MITFAS_THREADS environment variable when set.
int resolve_thread_count(int requested);

/// Runs body(begin, end, worker) over [0, n) split into contiguous chunks, one
/// per worker. Exceptions from workers are rethrown on the calling thread.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t, int)>& body);

}  // namespace mitfas
