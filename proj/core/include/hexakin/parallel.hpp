#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace hexakin {

/// Worker count: explicit request, else HEXAKIN_JOBS, else hardware concurrency.
int resolve_jobs(int requested = 0);

/// Split [0, total) into `jobs` contiguous chunks and run fn(chunk_index,
/// begin, end) on worker threads. Chunk boundaries depend on `jobs`, but any
/// per-index computation is unaffected, so merging chunk results in chunk
/// order yields output independent of the worker count.
void parallel_chunks(std::uint64_t total, int jobs,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

} // namespace hexakin
