#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace agc {

// Kernel parallelism cap: min(hardware, AGC_THREADS when set).
inline std::size_t num_threads() {
  static const std::size_t n = [] {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("AGC_THREADS")) {
      long v = std::atol(env);
      if (v >= 1 && static_cast<std::size_t>(v) < hw) hw = v;
    }
    return hw;
  }();
  return n;
}

// Static row partition: thread t owns one contiguous chunk, so results
// are bit-stable for a fixed thread count.
template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn) {
  const std::size_t n = end - begin;
  const std::size_t nt = std::min(num_threads(), n == 0 ? std::size_t{1} : n);
  if (nt <= 1 || n < 512) {
    for (std::size_t i = begin; i < end; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = begin + t * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, t, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i, t);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace agc
