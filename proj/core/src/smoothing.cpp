#include "agc/smoothing.hpp"

#include <cmath>
#include <vector>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

void SmoothingConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("smoothing: alpha must be in [0,1]");
  if (variant == SmoothingVariant::ssgc_average && num_hops == 0) {
    throw InvalidConfig("smoothing: ssgc_average requires num_hops >= 1");
  }
}

namespace {

std::vector<float> inv_sqrt_degrees(const CsrGraph& g, bool self_loops) {
  std::vector<float> inv(g.num_nodes);
  for (std::uint64_t i = 0; i < g.num_nodes; ++i) {
    const double dt = static_cast<double>(g.degrees[i]) + (self_loops ? 1.0 : 0.0);
    inv[i] = dt > 0.0 ? static_cast<float>(1.0 / std::sqrt(dt)) : 0.0f;
  }
  return inv;
}

// out = S * in, one parallel pass over destination rows with double
// accumulators per row.
void spmm_step(const CsrGraph& g, const std::vector<float>& inv_sqrt,
               bool self_loops, const FeatureMatrix& in, FeatureMatrix& out) {
  const std::size_t d = in.cols;
  parallel_for(0, g.num_nodes, [&](std::size_t u, std::size_t) {
    std::vector<double> acc(d, 0.0);
    for (std::uint64_t v : g.neighbors(u)) {
      const double w = inv_sqrt[v];
      const float* xr = in.row(v);
      for (std::size_t j = 0; j < d; ++j) acc[j] += w * xr[j];
    }
    if (self_loops) {
      const double w = inv_sqrt[u];
      const float* xr = in.row(u);
      for (std::size_t j = 0; j < d; ++j) acc[j] += w * xr[j];
    }
    const double wu = inv_sqrt[u];
    float* yr = out.row(u);
    for (std::size_t j = 0; j < d; ++j) yr[j] = static_cast<float>(wu * acc[j]);
  });
}

}  // namespace

Embedding normalized_propagate(const CsrGraph& graph, const FeatureMatrix& x,
                               std::uint32_t hops, bool add_self_loops) {
  if (x.rows != graph.num_nodes) {
    throw ShapeMismatch("propagate: feature rows != num_nodes");
  }
  Embedding cur = x;
  if (hops == 0) return cur;
  const auto inv = inv_sqrt_degrees(graph, add_self_loops);
  Embedding next(x.rows, x.cols);
  for (std::uint32_t k = 0; k < hops; ++k) {
    spmm_step(graph, inv, add_self_loops, cur, next);
    std::swap(cur, next);
  }
  return cur;
}

Embedding ssgc_smooth(const CsrGraph& graph, const FeatureMatrix& x,
                      const SmoothingConfig& cfg) {
  cfg.validate();
  if (cfg.variant != SmoothingVariant::ssgc_average) {
    throw InvalidConfig("ssgc_smooth: variant must be ssgc_average");
  }
  if (x.rows != graph.num_nodes) {
    throw ShapeMismatch("ssgc_smooth: feature rows != num_nodes");
  }
  if (cfg.alpha == 1.0) return x;  // collapses to the raw features bit-exactly
  const auto inv = inv_sqrt_degrees(graph, cfg.add_self_loops);
  const std::size_t d = x.cols;

  Embedding cur = x;
  Embedding next(x.rows, d);
  DenseMatrix<double> acc(x.rows, d, 0.0);
  for (std::uint32_t k = 0; k < cfg.num_hops; ++k) {
    spmm_step(graph, inv, cfg.add_self_loops, cur, next);
    std::swap(cur, next);
    parallel_for(0, x.rows, [&](std::size_t i, std::size_t) {
      const float* src = cur.row(i);
      double* dst = acc.row(i);
      for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
    });
  }

  Embedding z(x.rows, d);
  const double a = cfg.alpha;
  const double scale = (1.0 - a) / cfg.num_hops;
  parallel_for(0, x.rows, [&](std::size_t i, std::size_t) {
    const float* xr = x.row(i);
    const double* ar = acc.row(i);
    float* zr = z.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      zr[j] = static_cast<float>(a * xr[j] + scale * ar[j]);
    }
  });
  return z;
}

FeatureMatrix standardize_features(const FeatureMatrix& x) {
  if (x.rows < 2) throw ShapeMismatch("standardize: need at least 2 rows");
  const std::size_t n = x.rows, d = x.cols;
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float* r = x.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  }
  for (std::size_t j = 0; j < d; ++j) mean[j] /= n;
  for (std::size_t i = 0; i < n; ++i) {
    const float* r = x.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = r[j] - mean[j];
      var[j] += c * c;
    }
  }
  std::vector<double> inv_std(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const double v = var[j] / n;  // population variance
    inv_std[j] = v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
  }
  FeatureMatrix out(n, d);
  parallel_for(0, n, [&](std::size_t i, std::size_t) {
    const float* r = x.row(i);
    float* o = out.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      o[j] = static_cast<float>((r[j] - mean[j]) * inv_std[j]);
    }
  });
  return out;
}

}  // namespace agc
