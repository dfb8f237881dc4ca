#ifndef BESSELRULES_PARALLEL_HPP_
#define BESSELRULES_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace besselrules {

// Thread count from BESSELRULES_THREADS, else the hardware count.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("BESSELRULES_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// out[i] = f(i) for i < count. Results land in index order whatever the
// thread count; the first exception (by thread) is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, F f, unsigned threads) {
  std::vector<R> out(count);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) out[i] = f(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace besselrules

#endif  // BESSELRULES_PARALLEL_HPP_
