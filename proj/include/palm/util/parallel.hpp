#pragma once

#include <cstddef>
#include <functional>

namespace palm {

// Number of worker threads used for batch evaluation. Defaults to the hardware
// concurrency; override with the PALM_THREADS environment variable.
int worker_threads();

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries depend only on (n, chunk_size), never on the thread count,
// so per-chunk partial results can be reduced in chunk order to give
// bit-identical totals for any number of workers.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace palm
