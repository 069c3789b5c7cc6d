#include "agc/profile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

namespace agc {

std::uint64_t peak_rss_bytes() {
  std::ifstream status("/proc/self/status");
  if (status) {
    std::string line;
    while (std::getline(status, line)) {
      if (line.rfind("VmHWM:", 0) == 0) {
        std::uint64_t kb = 0;
        if (std::sscanf(line.c_str() + 6, "%lu", &kb) == 1) return kb * 1024;
      }
    }
  }
#if defined(__unix__) || defined(__APPLE__)
  struct rusage ru{};
  if (getrusage(RUSAGE_SELF, &ru) == 0 && ru.ru_maxrss > 0) {
    return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
  }
#endif
  return 0;
}

Profiler::Profiler() : start_(std::chrono::steady_clock::now()) {
  peak_.store(peak_rss_bytes());
  poller_ = std::thread([this] {
    while (!stop_.load(std::memory_order_relaxed)) {
      const std::uint64_t cur = peak_rss_bytes();
      std::uint64_t prev = peak_.load();
      while (cur > prev && !peak_.compare_exchange_weak(prev, cur)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  });
}

Profiler::~Profiler() {
  stop_.store(true);
  if (poller_.joinable()) poller_.join();
}

Profiler::Scope::Scope(Profiler& prof, std::string name)
    : prof_(prof), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

Profiler::Scope::~Scope() {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  prof_.record(name_, secs);
}

void Profiler::record(const std::string& name, double seconds) {
  phases_.emplace_back(name, seconds);
  const std::uint64_t cur = peak_rss_bytes();
  std::uint64_t prev = peak_.load();
  while (cur > prev && !peak_.compare_exchange_weak(prev, cur)) {
  }
}

RunProfile Profiler::finish() {
  RunProfile p;
  p.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  p.peak_mem_bytes = peak_.load();
  p.mem_unavailable = p.peak_mem_bytes == 0;
  p.phase_breakdown = phases_;
  return p;
}

std::string profile_to_json(const RunProfile& p) {
  std::ostringstream out;
  out << "{\"seconds\": " << p.wall_seconds
      << ", \"peak_mem_bytes\": " << p.peak_mem_bytes
      << ", \"mem_unavailable\": " << (p.mem_unavailable ? "true" : "false")
      << ", \"phases\": {";
  bool first = true;
  for (const auto& [name, secs] : p.phase_breakdown) {
    if (!first) out << ", ";
    first = false;
    out << "\"" << name << "\": " << secs;
  }
  out << "}}\n";
  return out.str();
}

}  // namespace agc
