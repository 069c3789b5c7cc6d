#pragma once

#include <cstdint>
#include <optional>

#include "agc/matrix.hpp"

namespace agc {

enum class KMeansInit { kmeanspp, random };

struct KMeansConfig {
  std::uint32_t k = 2;
  std::uint32_t max_iters = 300;
  std::uint32_t n_init = 10;  // restarts; best inertia wins (Lloyd only)
  double tol = 1e-4;          // relative inertia improvement
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::kmeanspp;
  std::optional<std::uint64_t> batch_size;  // set -> mini-batch mode

  void validate() const;
};

struct KMeansResult {
  Prototypes prototypes;
  HardAssignment assignment;
  double inertia = 0.0;
};

// Lloyd iterations (or mini-batch updates when batch_size is set) from a
// seeded kmeans++/random init. Deterministic per seed and thread count.
// Empty clusters are reseeded to the point farthest from its assigned
// centroid. Ties break toward the lowest centroid index.
KMeansResult kmeans_fit(const Embedding& z, const KMeansConfig& cfg);

// Nearest-centroid labeling by squared Euclidean distance.
HardAssignment kmeans_assign(const Embedding& z, const Prototypes& protos);

}  // namespace agc
