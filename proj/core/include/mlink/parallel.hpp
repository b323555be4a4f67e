#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mlink {

/// 0 means "use the machine's parallelism".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `threads` contiguous chunks and calls
/// fn(chunk, begin, end) for each. Chunk results must be combined by the
/// caller in chunk order; that keeps outputs independent of the thread count.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned c = 0; c < threads; ++c) {
      const std::size_t begin = count * c / threads;
      const std::size_t end = count * (c + 1) / threads;
      workers.emplace_back([&, c, begin, end] {
        try {
          fn(std::size_t{c}, begin, end);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of chunks parallel_chunks will use for `count` items.
inline unsigned chunk_count(std::size_t count, unsigned threads) {
  return static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
}

/// Runs fn(i) for every i in [0, count) across the pool.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  parallel_chunks(count, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace mlink
