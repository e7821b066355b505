#include "schroflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace schroflow {

namespace {

// Below this many items the thread start-up cost dominates.
constexpr std::size_t min_items_per_thread = 16384;

int threads_from_env() {
  if (const char* env = std::getenv("SCHROFLOW_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return std::max(1, int(std::thread::hardware_concurrency()));
}

}  // namespace

int kernel_threads() {
  static const int threads = threads_from_env();
  return threads;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers =
      std::min<std::size_t>(std::size_t(kernel_threads()), n / min_items_per_thread);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
}

}  // namespace schroflow
