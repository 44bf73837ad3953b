#pragma once
#include <cstddef>
#include <functional>
#include <vector>

namespace gpd {

// Worker-count control. 0 means: GLACIER_PD_THREADS if set, else hardware
// concurrency. Results must be bit-identical for every worker count, so all
// parallel loops use fixed-size chunks and any reduction combines per-chunk
// partials serially in chunk order.
void set_thread_count(int n);
int thread_count();

// Runs fn(begin, end) over [0, n) split into chunks of at most `grain`.
// Chunk boundaries depend only on n and grain, never on the worker count.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Deterministic reduction: fn fills out[c] for chunk c; caller combines.
// Returns the number of chunks for (n, grain).
std::size_t chunk_count(std::size_t n, std::size_t grain);

}  // namespace gpd
