#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "agc/csr_graph.hpp"
#include "agc/losses.hpp"
#include "agc/matrix.hpp"
#include "agc/mlp.hpp"

namespace agc {

struct AdamState {
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam over a flat parameter view. m/v are sized lazily
// on first use.
void adam_step_flat(std::vector<double*> params, const std::vector<double>& grads,
                    AdamState& state);
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

enum class Objective { dmon, mincut, dec };

Objective objective_from_name(const std::string& name);
std::string objective_name(Objective o);

struct TrainConfig {
  Objective objective = Objective::dmon;
  double lambda_clust = 1.0;
  std::uint32_t epochs = 200;
  std::optional<std::uint64_t> batch_nodes;
  std::uint32_t target_refresh = 5;  // dec target update period (epochs)
  std::uint64_t seed = 0;

  std::uint32_t k = 2;
  std::uint32_t hidden_dim = 64;
  std::uint32_t embed_dim = 16;  // dec encoder output width
  double nu = 1.0;
  double lr = 1e-3;

  void validate() const;
};

struct SubgraphBatch {
  std::vector<std::uint64_t> node_ids;  // sorted global ids
  CsrGraph local_graph;
};

// Uniform sample of batch_nodes distinct nodes plus the induced local
// graph. Deterministic per rng stream position.
SubgraphBatch sample_induced_subgraph(const CsrGraph& graph,
                                      std::uint64_t batch_nodes,
                                      std::mt19937_64& rng);

FeatureMatrix slice_rows(const FeatureMatrix& x,
                         const std::vector<std::uint64_t>& rows);

struct ModelState {
  MlpParams params;
  std::optional<Prototypes> prototypes;  // dec only
  AdamState adam;
  AdamState proto_adam;
};

struct EpochLog {
  std::uint32_t epoch = 0;
  double loss = 0.0;
  double aux = 0.0;  // collapse (dmon) or ortho (mincut); 0 for dec
  double wall_ms = 0.0;
};

struct TrainResult {
  ModelState state;
  SoftAssignment assignment;
  std::vector<EpochLog> log;
};

// Gradients of the configured clustering loss with respect to every
// parameter (and the prototypes for dec).
struct LossGrads {
  double loss = 0.0;
  double aux = 0.0;
  MlpParams mlp;
  DenseMatrix<double> protos;  // empty unless dec
};
LossGrads backward(Objective objective, const CsrGraph& graph,
                   const FeatureMatrix& x, const MlpParams& params,
                   const Prototypes* protos, const SoftAssignment* dec_p,
                   double nu, double lambda);

TrainResult train(const CsrGraph& graph, const FeatureMatrix& features,
                  const TrainConfig& cfg);

void write_training_log(const std::string& path, const std::vector<EpochLog>& log);

}  // namespace agc
