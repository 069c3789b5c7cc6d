#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"

namespace agc {

struct SbmSpec {
  std::vector<std::uint64_t> block_sizes;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  std::uint64_t total_nodes() const;
};

// Planted-partition sampler: every intra-block pair is connected with
// p_in, every inter-block pair with p_out, independently. Deterministic
// per seed. Labels are block membership.
std::pair<CsrGraph, LabelVector> generate_sbm(const SbmSpec& spec);

// i.i.d. standard-normal node attributes, deterministic per seed.
FeatureMatrix gaussian_features(std::uint64_t n, std::uint64_t d, std::uint64_t seed);

// Attributed-SBM node features: per-block mean vectors (entries
// N(0, separation^2)) plus unit Gaussian node noise. separation = 0
// degenerates to label-independent noise. Deterministic per seed.
FeatureMatrix block_features(const LabelVector& labels, std::uint64_t d,
                             double separation, std::uint64_t seed);

}  // namespace agc
