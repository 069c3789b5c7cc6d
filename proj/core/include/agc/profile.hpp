#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace agc {

struct RunProfile {
  double wall_seconds = 0.0;
  std::uint64_t peak_mem_bytes = 0;
  bool mem_unavailable = false;
  std::vector<std::pair<std::string, double>> phase_breakdown;
};

// Process peak resident set size; 0 when the OS facility is unavailable.
std::uint64_t peak_rss_bytes();

// Wall-clock profiler with named phases and a 100 ms memory poll.
class Profiler {
 public:
  Profiler();
  ~Profiler();
  Profiler(const Profiler&) = delete;
  Profiler& operator=(const Profiler&) = delete;

  class Scope {
   public:
    Scope(Profiler& prof, std::string name);
    ~Scope();
    Scope(const Scope&) = delete;

   private:
    Profiler& prof_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
  };

  Scope phase(std::string name) { return Scope(*this, std::move(name)); }
  RunProfile finish();

 private:
  friend class Scope;
  void record(const std::string& name, double seconds);

  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, double>> phases_;
  std::atomic<std::uint64_t> peak_{0};
  std::atomic<bool> stop_{false};
  std::thread poller_;
};

std::string profile_to_json(const RunProfile& p);

}  // namespace agc
