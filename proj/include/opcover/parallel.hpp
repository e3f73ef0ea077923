#ifndef OPCOVER_PARALLEL_HPP
#define OPCOVER_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace opcover {

/// Worker count: explicit value if > 0, else OPCOVER_THREADS (0 = auto).
inline unsigned worker_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OPCOVER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, count) on up to `workers` threads.  Each index
/// runs exactly once; callers write results into per-index slots and reduce in
/// index order afterwards, so the output never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body, unsigned workers = 0) {
  const unsigned w = static_cast<unsigned>(
      std::min<std::size_t>(worker_count(workers), std::max<std::size_t>(1, count)));
  if (w <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += w) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace opcover

#endif  // OPCOVER_PARALLEL_HPP
