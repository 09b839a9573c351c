#include "hsap/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace hsap {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t total, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const int nthreads = resolve_thread_count(threads);
  if (total == 0) return;
  if (nthreads <= 1 || total < 2048) {
    fn(0, total);
    return;
  }
  const std::size_t nchunks =
      std::min<std::size_t>(static_cast<std::size_t>(nthreads), total);
  const std::size_t chunk = (total + nchunks - 1) / nchunks;
  std::vector<std::thread> pool;
  pool.reserve(nchunks);
  for (std::size_t c = 0; c < nchunks; ++c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hsap
