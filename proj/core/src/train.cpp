#include "agc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "agc/assign.hpp"
#include "agc/errors.hpp"
#include "agc/kmeans.hpp"

namespace agc {

void adam_step_flat(std::vector<double*> params, const std::vector<double>& grads,
                    AdamState& state) {
  const std::size_t n = params.size();
  if (grads.size() != n) throw ShapeMismatch("adam: gradient size mismatch");
  if (state.m.size() != n) {
    state.m.assign(n, 0.0);
    state.v.assign(n, 0.0);
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    *params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  const std::size_t n = params.num_params();
  std::vector<double*> views(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    views[i] = &params.param(i);
    g[i] = grads.param(i);
  }
  adam_step_flat(std::move(views), g, state);
}

Objective objective_from_name(const std::string& name) {
  if (name == "dmon") return Objective::dmon;
  if (name == "mincut") return Objective::mincut;
  if (name == "dec") return Objective::dec;
  throw InvalidConfig("unknown objective: " + name);
}

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::dmon: return "dmon";
    case Objective::mincut: return "mincut";
    case Objective::dec: return "dec";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidConfig("train: epochs must be >= 1");
  if (lambda_clust < 0.0) throw InvalidConfig("train: lambda_clust must be >= 0");
  if (k < 1) throw InvalidConfig("train: k must be >= 1");
  if (batch_nodes && *batch_nodes < 1) throw InvalidConfig("train: batch_nodes must be >= 1");
  if (objective == Objective::dec && target_refresh < 1) {
    throw InvalidConfig("train: target_refresh must be >= 1");
  }
}

SubgraphBatch sample_induced_subgraph(const CsrGraph& graph,
                                      std::uint64_t batch_nodes,
                                      std::mt19937_64& rng) {
  if (batch_nodes == 0) throw InvalidConfig("sample_induced_subgraph: batch_nodes = 0");
  if (batch_nodes > graph.num_nodes) {
    throw InvalidConfig("sample_induced_subgraph: batch_nodes > num_nodes");
  }
  const std::uint64_t n = graph.num_nodes;
  // partial Fisher-Yates over an index array
  std::vector<std::uint64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::uint64_t i = 0; i < batch_nodes; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  SubgraphBatch batch;
  batch.node_ids.assign(idx.begin(), idx.begin() + batch_nodes);
  std::sort(batch.node_ids.begin(), batch.node_ids.end());

  std::vector<std::uint64_t> local_of(n, UINT64_MAX);
  for (std::uint64_t i = 0; i < batch_nodes; ++i) local_of[batch.node_ids[i]] = i;
  EdgeList edges;
  for (std::uint64_t lu = 0; lu < batch_nodes; ++lu) {
    const std::uint64_t gu = batch.node_ids[lu];
    for (std::uint64_t gv : graph.neighbors(gu)) {
      if (gu < gv && local_of[gv] != UINT64_MAX) {
        edges.emplace_back(lu, local_of[gv]);
      }
    }
  }
  batch.local_graph = build_graph(edges, batch_nodes);
  return batch;
}

FeatureMatrix slice_rows(const FeatureMatrix& x, const std::vector<std::uint64_t>& rows) {
  FeatureMatrix out(rows.size(), x.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const float* src = x.row(rows[i]);
    std::copy(src, src + x.cols, out.row(i));
  }
  return out;
}

namespace {

void check_finite(const MlpParams& g, const DenseMatrix<double>* protos) {
  auto scan = [](const std::vector<double>& v, const char* name) {
    for (double x : v) {
      if (!std::isfinite(x)) throw NumericalFailure(std::string("non-finite gradient in ") + name);
    }
  };
  scan(g.w1.data, "w1");
  scan(g.b1, "b1");
  scan(g.w2.data, "w2");
  scan(g.b2, "b2");
  if (protos) scan(protos->data, "prototypes");
}

}  // namespace

LossGrads backward(Objective objective, const CsrGraph& graph,
                   const FeatureMatrix& x, const MlpParams& params,
                   const Prototypes* protos, const SoftAssignment* dec_p,
                   double nu, double lambda) {
  MlpForward fwd = mlp_forward(x, params);
  LossGrads out;
  out.mlp.w1 = DenseMatrix<double>(params.in_dim(), params.hidden_dim());
  out.mlp.b1.assign(params.hidden_dim(), 0.0);
  out.mlp.w2 = DenseMatrix<double>(params.hidden_dim(), params.out_dim());
  out.mlp.b2.assign(params.out_dim(), 0.0);

  DenseMatrix<double> d_out;
  if (objective == Objective::dec) {
    if (!protos || !dec_p) throw InvalidConfig("backward: dec requires prototypes and target");
    SoftAssignment q = student_t_assign(fwd.out, *protos, nu);
    out.loss = lambda * dec_kl_loss(q, *dec_p);
    DecGrads dg = dec_kl_grads(fwd.out, *protos, q, *dec_p, nu);
    d_out = std::move(dg.d_z);
    out.protos = std::move(dg.d_protos);
    if (lambda != 1.0) {
      for (auto& v : d_out.data) v *= lambda;
      for (auto& v : out.protos.data) v *= lambda;
    }
  } else {
    SoftAssignment c = row_softmax(fwd.out);
    DenseMatrix<double> d_c;
    if (objective == Objective::dmon) {
      DmonLoss l = dmon_loss(c, graph);
      out.loss = lambda * l.loss;
      out.aux = l.collapse_term;
      d_c = dmon_loss_grad(c, graph);
    } else {
      MincutLoss l = mincut_loss(c, graph);
      out.loss = lambda * l.loss();
      out.aux = l.ortho_term;
      d_c = mincut_loss_grad(c, graph);
    }
    if (lambda != 1.0) {
      for (auto& v : d_c.data) v *= lambda;
    }
    d_out = softmax_backward(c, d_c);
  }
  mlp_backward(x, params, fwd, d_out, out.mlp);
  check_finite(out.mlp, objective == Objective::dec ? &out.protos : nullptr);
  return out;
}

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

SoftAssignment final_assignment(Objective obj, const CsrGraph&, const FeatureMatrix& x,
                                const ModelState& st, double nu) {
  MlpForward fwd = mlp_forward(x, st.params);
  if (obj == Objective::dec) return student_t_assign(fwd.out, *st.prototypes, nu);
  return row_softmax(fwd.out);
}

}  // namespace

TrainResult train(const CsrGraph& graph, const FeatureMatrix& features,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (features.rows != graph.num_nodes) {
    throw ShapeMismatch("train: feature rows != num_nodes");
  }
  const bool is_dec = cfg.objective == Objective::dec;
  const std::size_t out_dim = is_dec ? cfg.embed_dim : cfg.k;

  TrainResult res;
  res.state.params = make_mlp(features.cols, cfg.hidden_dim, out_dim, cfg.seed);
  res.state.adam.lr = cfg.lr;
  res.state.proto_adam.lr = cfg.lr;

  std::mt19937_64 rng(cfg.seed ^ 0x5b1d5a3cULL);  // batch-sampling stream
  SoftAssignment dec_p;
  if (is_dec) {
    // prototypes from kmeans on the untrained encoder output
    MlpForward fwd = mlp_forward(features, res.state.params);
    Embedding z0(fwd.out.rows, fwd.out.cols);
    for (std::size_t i = 0; i < fwd.out.data.size(); ++i) {
      z0.data[i] = static_cast<float>(fwd.out.data[i]);
    }
    KMeansConfig km;
    km.k = cfg.k;
    km.seed = cfg.seed;
    KMeansResult kr = kmeans_fit(z0, km);
    res.state.prototypes = std::move(kr.prototypes);
    SoftAssignment q = student_t_assign(fwd.out, *res.state.prototypes, cfg.nu);
    dec_p = dec_target(q);
  }

  std::vector<std::uint64_t> order(graph.num_nodes);
  std::iota(order.begin(), order.end(), 0);

  for (std::uint32_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double t0 = now_ms();
    double epoch_loss = 0.0, epoch_aux = 0.0;

    if (is_dec && cfg.target_refresh > 0 && (epoch - 1) % cfg.target_refresh == 0 &&
        epoch > 1) {
      MlpForward fwd = mlp_forward(features, res.state.params);
      SoftAssignment q = student_t_assign(fwd.out, *res.state.prototypes, cfg.nu);
      dec_p = dec_target(q);
    }

    if (!cfg.batch_nodes || *cfg.batch_nodes >= graph.num_nodes) {
      LossGrads g = backward(cfg.objective, graph, features, res.state.params,
                             is_dec ? &*res.state.prototypes : nullptr,
                             is_dec ? &dec_p : nullptr, cfg.nu, cfg.lambda_clust);
      adam_step(res.state.params, g.mlp, res.state.adam);
      if (is_dec) {
        std::vector<double*> views(g.protos.data.size());
        for (std::size_t i = 0; i < views.size(); ++i) {
          views[i] = &res.state.prototypes->centers.data[i];
        }
        adam_step_flat(std::move(views), g.protos.data, res.state.proto_adam);
      }
      epoch_loss = g.loss;
      epoch_aux = g.aux;
    } else {
      const std::uint64_t bn = *cfg.batch_nodes;
      const std::uint64_t num_batches = (graph.num_nodes + bn - 1) / bn;
      std::size_t used = 0;
      for (std::uint64_t b = 0; b < num_batches; ++b) {
        SubgraphBatch batch = sample_induced_subgraph(graph, bn, rng);
        if (batch.local_graph.num_edges() == 0) continue;  // degenerate batch
        FeatureMatrix xb = slice_rows(features, batch.node_ids);
        SoftAssignment pb;
        const SoftAssignment* pb_ptr = nullptr;
        if (is_dec) {
          pb.probs = DenseMatrix<double>(batch.node_ids.size(), cfg.k);
          for (std::size_t i = 0; i < batch.node_ids.size(); ++i) {
            const double* src = dec_p.probs.row(batch.node_ids[i]);
            std::copy(src, src + cfg.k, pb.probs.row(i));
          }
          pb_ptr = &pb;
        }
        LossGrads g = backward(cfg.objective, batch.local_graph, xb, res.state.params,
                               is_dec ? &*res.state.prototypes : nullptr, pb_ptr,
                               cfg.nu, cfg.lambda_clust);
        adam_step(res.state.params, g.mlp, res.state.adam);
        if (is_dec) {
          std::vector<double*> views(g.protos.data.size());
          for (std::size_t i = 0; i < views.size(); ++i) {
            views[i] = &res.state.prototypes->centers.data[i];
          }
          adam_step_flat(std::move(views), g.protos.data, res.state.proto_adam);
        }
        epoch_loss += g.loss;
        epoch_aux += g.aux;
        ++used;
      }
      if (used > 0) {
        epoch_loss /= used;
        epoch_aux /= used;
      }
    }

    res.log.push_back({epoch, epoch_loss, epoch_aux, now_ms() - t0});
  }

  res.assignment = final_assignment(cfg.objective, graph, features, res.state, cfg.nu);
  return res;
}

void write_training_log(const std::string& path, const std::vector<EpochLog>& log) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const auto& e : log) {
    out << e.epoch << '\t' << e.loss << '\t' << e.aux << '\t' << e.wall_ms << '\n';
  }
}

}  // namespace agc
