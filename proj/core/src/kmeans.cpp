#include "agc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

void KMeansConfig::validate() const {
  if (k < 1) throw InvalidConfig("kmeans: k must be >= 1");
  if (tol < 0.0) throw InvalidConfig("kmeans: tol must be >= 0");
  if (n_init < 1) throw InvalidConfig("kmeans: n_init must be >= 1");
  if (batch_size && *batch_size < 1) throw InvalidConfig("kmeans: batch_size must be >= 1");
}

namespace {

double sq_dist(const float* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double c = a[j] - b[j];
    s += c * c;
  }
  return s;
}

std::uint32_t nearest(const float* p, const Prototypes& protos) {
  const std::size_t d = protos.dim();
  std::uint32_t best = 0;
  double best_d = sq_dist(p, protos.centers.row(0), d);
  for (std::size_t c = 1; c < protos.k(); ++c) {
    const double dd = sq_dist(p, protos.centers.row(c), d);
    if (dd < best_d) {  // strict: ties stay with the lowest index
      best_d = dd;
      best = static_cast<std::uint32_t>(c);
    }
  }
  return best;
}

Prototypes init_centers(const Embedding& z, const KMeansConfig& cfg,
                        std::mt19937_64& rng) {
  const std::size_t n = z.rows, d = z.cols, k = cfg.k;
  Prototypes protos;
  protos.centers = DenseMatrix<double>(k, d);
  if (cfg.init == KMeansInit::random) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t c = 0; c < k; ++c) {
      const float* src = z.row(idx[c]);
      std::copy(src, src + d, protos.centers.row(c));
    }
    return protos;
  }
  // kmeans++: D^2 sampling
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  std::copy(z.row(pick), z.row(pick) + d, protos.centers.row(0));
  std::vector<double> dist2(n);
  for (std::size_t i = 0; i < n; ++i) dist2[i] = sq_dist(z.row(i), protos.centers.row(0), d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = std::accumulate(dist2.begin(), dist2.end(), 0.0);
    if (total <= 0.0) {
      pick = first(rng);  // all mass on existing centers; fall back to uniform
    } else {
      double r = unif(rng) * total;
      pick = n - 1;
      double run = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        run += dist2[i];
        if (run >= r) {
          pick = i;
          break;
        }
      }
    }
    std::copy(z.row(pick), z.row(pick) + d, protos.centers.row(c));
    for (std::size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], sq_dist(z.row(i), protos.centers.row(c), d));
    }
  }
  return protos;
}

// Parallel assignment with per-thread centroid partial sums merged in
// thread order (bit-stable for a fixed thread count).
double assign_and_accumulate(const Embedding& z, const Prototypes& protos,
                             std::vector<std::uint32_t>& labels,
                             DenseMatrix<double>* sums,
                             std::vector<std::uint64_t>* counts) {
  const std::size_t n = z.rows, d = z.cols, k = protos.k();
  const std::size_t nt = num_threads();
  std::vector<DenseMatrix<double>> part_sums(nt);
  std::vector<std::vector<std::uint64_t>> part_counts(nt);
  std::vector<double> part_inertia(nt, 0.0);
  if (sums) {
    for (std::size_t t = 0; t < nt; ++t) {
      part_sums[t] = DenseMatrix<double>(k, d);
      part_counts[t].assign(k, 0);
    }
  }
  parallel_for(0, n, [&](std::size_t i, std::size_t t) {
    const std::uint32_t c = nearest(z.row(i), protos);
    labels[i] = c;
    part_inertia[t] += sq_dist(z.row(i), protos.centers.row(c), d);
    if (sums) {
      double* s = part_sums[t].row(c);
      const float* p = z.row(i);
      for (std::size_t j = 0; j < d; ++j) s[j] += p[j];
      ++part_counts[t][c];
    }
  });
  if (sums) {
    *sums = DenseMatrix<double>(k, d);
    counts->assign(k, 0);
    for (std::size_t t = 0; t < nt; ++t) {
      if (part_sums[t].rows == 0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        double* dst = sums->row(c);
        const double* src = part_sums[t].row(c);
        for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
        (*counts)[c] += part_counts[t][c];
      }
    }
  }
  double inertia = 0.0;
  for (std::size_t t = 0; t < nt; ++t) inertia += part_inertia[t];
  return inertia;
}

void repair_empty_clusters(const Embedding& z, Prototypes& protos,
                           const std::vector<std::uint32_t>& labels,
                           const std::vector<std::uint64_t>& counts) {
  const std::size_t n = z.rows, d = z.cols;
  std::vector<bool> taken(n, false);
  for (std::size_t c = 0; c < protos.k(); ++c) {
    if (counts[c] != 0) continue;
    // steal the point farthest from its assigned centroid
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double dd = sq_dist(z.row(i), protos.centers.row(labels[i]), d);
      if (dd > far_d) {
        far_d = dd;
        far = i;
      }
    }
    taken[far] = true;
    const float* src = z.row(far);
    std::copy(src, src + d, protos.centers.row(c));
  }
}

KMeansResult lloyd_fit(const Embedding& z, const KMeansConfig& cfg,
                       Prototypes protos) {
  const std::size_t n = z.rows, d = z.cols, k = cfg.k;
  std::vector<std::uint32_t> labels(n, 0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  double inertia = prev_inertia;
  for (std::uint32_t it = 0; it < cfg.max_iters; ++it) {
    DenseMatrix<double> sums;
    std::vector<std::uint64_t> counts;
    inertia = assign_and_accumulate(z, protos, labels, &sums, &counts);
    bool had_empty = false;
    for (std::size_t c = 0; c < k; ++c) had_empty |= counts[c] == 0;
    if (had_empty) {
      repair_empty_clusters(z, protos, labels, counts);
      inertia = assign_and_accumulate(z, protos, labels, &sums, &counts);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      double* ctr = protos.centers.row(c);
      const double* s = sums.row(c);
      for (std::size_t j = 0; j < d; ++j) ctr[j] = s[j] / counts[c];
    }
    if (std::isfinite(prev_inertia)) {
      const double rel = prev_inertia > 0.0
                             ? (prev_inertia - inertia) / prev_inertia
                             : 0.0;
      if (rel < cfg.tol) break;
    }
    prev_inertia = inertia;
  }
  // final labeling against the converged centers
  inertia = assign_and_accumulate(z, protos, labels, nullptr, nullptr);
  KMeansResult res;
  res.prototypes = std::move(protos);
  res.assignment = HardAssignment{std::move(labels), cfg.k};
  res.inertia = inertia;
  return res;
}

KMeansResult minibatch_fit(const Embedding& z, const KMeansConfig& cfg,
                           Prototypes protos, std::mt19937_64& rng) {
  const std::size_t n = z.rows, d = z.cols;
  const std::size_t batch = std::min<std::size_t>(*cfg.batch_size, n);
  std::vector<std::uint64_t> center_counts(cfg.k, 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = n;  // force a shuffle on first use
  for (std::uint32_t it = 0; it < cfg.max_iters; ++it) {
    if (cursor + batch > n) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t i = order[cursor + b];
      const std::uint32_t c = nearest(z.row(i), protos);
      const double eta = 1.0 / static_cast<double>(++center_counts[c]);
      double* ctr = protos.centers.row(c);
      const float* p = z.row(i);
      for (std::size_t j = 0; j < d; ++j) ctr[j] += eta * (p[j] - ctr[j]);
    }
    cursor += batch;
  }
  std::vector<std::uint32_t> labels(n, 0);
  const double inertia = assign_and_accumulate(z, protos, labels, nullptr, nullptr);
  KMeansResult res;
  res.prototypes = std::move(protos);
  res.assignment = HardAssignment{std::move(labels), cfg.k};
  res.inertia = inertia;
  return res;
}

}  // namespace

KMeansResult kmeans_fit(const Embedding& z, const KMeansConfig& cfg) {
  cfg.validate();
  if (z.rows < cfg.k) throw TooFewPoints("kmeans: N < k");
  std::mt19937_64 rng(cfg.seed);
  if (cfg.batch_size) {
    Prototypes protos = init_centers(z, cfg, rng);
    return minibatch_fit(z, cfg, std::move(protos), rng);
  }
  // Lloyd only finds local optima; take the best of n_init restarts,
  // all drawn from the one seeded stream so the result stays deterministic.
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::uint32_t r = 0; r < cfg.n_init; ++r) {
    KMeansResult res = lloyd_fit(z, cfg, init_centers(z, cfg, rng));
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

HardAssignment kmeans_assign(const Embedding& z, const Prototypes& protos) {
  if (z.cols != protos.dim()) throw ShapeMismatch("kmeans_assign: dimension mismatch");
  std::vector<std::uint32_t> labels(z.rows, 0);
  parallel_for(0, z.rows, [&](std::size_t i, std::size_t) {
    labels[i] = nearest(z.row(i), protos);
  });
  return HardAssignment{std::move(labels), static_cast<std::uint32_t>(protos.k())};
}

}  // namespace agc
