#pragma once

#include "agc/config.hpp"
#include "agc/metrics.hpp"
#include "agc/profile.hpp"

namespace agc {

struct PipelineResult {
  std::vector<std::uint64_t> seeds;
  std::vector<MetricsReport> per_seed;
  std::vector<RunProfile> profiles;
  AggregateReport aggregate;
};

// One run per seed: load/generate -> optional smoothing -> method ->
// evaluate -> profile. Writes per-seed metrics/assignments/profiles and
// an aggregate mean +- population-SD report into cfg.output_dir.
// A failed seed aborts the batch; results of earlier seeds are kept.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace agc
