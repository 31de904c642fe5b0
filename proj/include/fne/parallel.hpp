#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace fne {

// Splits [0, n) into fixed-size chunks and hands them to `threads` workers.
// The chunk layout depends only on n and chunk_size, never on the thread
// count, so callers that write per-chunk results and combine them in chunk
// order get bit-identical answers for any number of threads.
//
// body(chunk_index, begin, end) must be safe to call concurrently for
// distinct chunks.
template <class Body>
void for_each_chunk(std::size_t n, std::size_t chunk_size, unsigned threads, Body&& body) {
  if (n == 0) return;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    body(c, begin, std::min(n, begin + chunk_size));
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
}

// Number of chunks for_each_chunk will use.
inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace fne
