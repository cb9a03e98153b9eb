#include "phasebin/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <exception>
#include <mutex>

namespace phasebin {

namespace {
std::atomic<int> g_threads{0};
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

void set_worker_threads(int threads) { g_threads.store(threads < 0 ? 0 : threads); }

int worker_threads() {
  const int t = g_threads.load();
  return t > 0 ? t : omp_get_max_threads();
}

void parallel_for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body) {
  if (blocks == 0) return;
  const int threads = worker_threads();
  if (threads <= 1 || blocks == 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t b = 0; b < n; ++b) {
    try {
      body(static_cast<std::size_t>(b));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> reduce_blocks(const std::vector<std::vector<double>>& partials) {
  if (partials.empty()) return {};
  const std::size_t len = partials.front().size();
  std::vector<CompensatedSum> acc(len);
  for (const auto& p : partials) {
    for (std::size_t i = 0; i < len; ++i) acc[i].add(p[i]);
  }
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = acc[i].value();
  return out;
}

}  // namespace phasebin
