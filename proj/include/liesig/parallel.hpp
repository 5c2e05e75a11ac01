#ifndef LIESIG_PARALLEL_HPP
#define LIESIG_PARALLEL_HPP

// Chunked work distribution with a result that does not depend on the number
// of workers: chunk c always covers items [c * chunk, (c + 1) * chunk) and
// seeds its own RngStream(seed, c); partial results come back in chunk order
// and the caller folds them left to right.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace liesig {

inline constexpr std::uint64_t kDefaultChunkSize = 1u << 16;

inline int default_thread_count() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Calls fn(chunk_index, begin, end) for every chunk and returns the partials
/// indexed by chunk.
template <typename Partial, typename Fn>
std::vector<Partial> map_chunks(std::uint64_t total, std::uint64_t chunk_size, int threads, Fn&& fn) {
  const std::uint64_t chunks = chunk_size == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::uint64_t begin = c * chunk_size;
        partials[c] = fn(c, begin, std::min(total, begin + chunk_size));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  const int workers = static_cast<int>(std::clamp<std::uint64_t>(threads < 1 ? 1 : threads, 1, std::max<std::uint64_t>(chunks, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return partials;
}

}  // namespace liesig

#endif
