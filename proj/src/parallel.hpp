#pragma once

#include <cstdint>
#include <functional>

namespace epifit {

// Number of workers actually used for `requested` (0 = hardware default).
int resolve_workers(int requested);

// Splits [0, count) into one contiguous chunk per worker and runs `body`
// on each chunk concurrently. Chunk boundaries depend only on (count,
// workers); results must be written to per-index or per-chunk slots so the
// merged outcome is independent of scheduling. If any chunk throws, the
// exception from the lowest chunk id is rethrown after all workers join.
void parallel_chunks(std::uint64_t count, int workers,
                     const std::function<void(std::uint64_t begin, std::uint64_t end,
                                              int chunk_id)>& body);

} // namespace epifit
