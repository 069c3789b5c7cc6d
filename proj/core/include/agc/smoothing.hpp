#pragma once

#include <cstdint>

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"

namespace agc {

enum class SmoothingVariant { sgc_power, ssgc_average };

struct SmoothingConfig {
  std::uint32_t num_hops = 16;
  double alpha = 0.05;  // teleport weight on the raw features
  bool add_self_loops = true;
  SmoothingVariant variant = SmoothingVariant::ssgc_average;

  void validate() const;
};

// S^hops * X with S = D~^{-1/2} A~ D~^{-1/2} (A~ = A + I when
// add_self_loops). Zero-degree rows without self-loops propagate to zero.
Embedding normalized_propagate(const CsrGraph& graph, const FeatureMatrix& x,
                               std::uint32_t hops, bool add_self_loops = true);

// Z = alpha*X + (1-alpha) * (1/K) * sum_{k=1..K} S^k X, computed with one
// running power (K sparse multiplies, no dense N x N matrix).
Embedding ssgc_smooth(const CsrGraph& graph, const FeatureMatrix& x,
                      const SmoothingConfig& cfg);

// Column-wise zero mean, unit population variance; constant columns
// become all-zero.
FeatureMatrix standardize_features(const FeatureMatrix& x);

}  // namespace agc
