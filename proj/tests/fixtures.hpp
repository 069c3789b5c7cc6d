#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles
// here are deliberately naive (dense matrices, O(N^2) double sums,
// exhaustive enumeration) and never call the sparse implementation paths
// they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"
#include "agc/metrics.hpp"

namespace agc::testing {

// Two triangles {0,1,2} and {3,4,5} bridged by edge (2,3).
inline CsrGraph barbell() {
  return build_graph({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}}, 6);
}

inline HardAssignment barbell_partition() {
  return HardAssignment{{0, 0, 0, 1, 1, 1}, 2};
}

inline CsrGraph random_graph(std::mt19937_64& rng, std::uint64_t n, double p) {
  std::bernoulli_distribution coin(p);
  EdgeList edges;
  for (std::uint64_t u = 0; u + 1 < n; ++u) {
    for (std::uint64_t v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return build_graph(edges, n);
}

inline HardAssignment random_partition(std::mt19937_64& rng, std::size_t n,
                                       std::uint32_t k) {
  std::uniform_int_distribution<std::uint32_t> pick(0, k - 1);
  HardAssignment h;
  h.k = k;
  h.labels.resize(n);
  for (auto& l : h.labels) l = pick(rng);
  return h;
}

// Dense D~^{-1/2} A~ D~^{-1/2}.
inline std::vector<std::vector<double>> dense_norm_adj(const CsrGraph& g,
                                                       bool self_loops) {
  const std::size_t n = g.num_nodes;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : g.neighbors(u)) a[u][v] = 1.0;
    if (self_loops) a[u][u] = 1.0;
  }
  std::vector<double> inv(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    double d = g.degrees[u] + (self_loops ? 1.0 : 0.0);
    inv[u] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) a[u][v] *= inv[u] * inv[v];
  }
  return a;
}

// S^hops * X with dense matrices.
inline std::vector<std::vector<double>> dense_propagate(const CsrGraph& g,
                                                        const FeatureMatrix& x,
                                                        std::uint32_t hops,
                                                        bool self_loops) {
  const std::size_t n = x.rows, d = x.cols;
  auto s = dense_norm_adj(g, self_loops);
  std::vector<std::vector<double>> cur(n, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) cur[i][j] = x.at(i, j);
  }
  for (std::uint32_t h = 0; h < hops; ++h) {
    std::vector<std::vector<double>> next(n, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t kk = 0; kk < n; ++kk) {
        if (s[i][kk] == 0.0) continue;
        for (std::size_t j = 0; j < d; ++j) next[i][j] += s[i][kk] * cur[kk][j];
      }
    }
    cur = std::move(next);
  }
  return cur;
}

// O(N^2) double-sum modularity straight from the definition.
inline double brute_modularity(const CsrGraph& g, const HardAssignment& pred) {
  const double two_m = static_cast<double>(g.col_idx.size());
  const std::size_t n = g.num_nodes;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u) {
    for (auto v : g.neighbors(u)) a[u][v] = 1.0;
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (pred.labels[i] != pred.labels[j]) continue;
      q += a[i][j] - static_cast<double>(g.degrees[i]) *
                         static_cast<double>(g.degrees[j]) / two_m;
    }
  }
  return q / two_m;
}

// Per-cluster boundary/volume enumeration for average conductance.
inline double brute_conductance(const CsrGraph& g, const HardAssignment& pred) {
  std::size_t k = 0;
  for (auto l : pred.labels) k = std::max<std::size_t>(k, l + 1);
  double sum = 0.0;
  std::size_t nonempty = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t internal = 0, cut = 0, members = 0;
    for (std::size_t u = 0; u < g.num_nodes; ++u) {
      if (pred.labels[u] != c) continue;
      ++members;
      for (auto v : g.neighbors(u)) {
        if (pred.labels[v] == c) {
          if (u < v) ++internal;
        } else {
          ++cut;
        }
      }
    }
    if (members == 0) continue;
    ++nonempty;
    const std::uint64_t denom = 2 * internal + cut;
    if (denom > 0) sum += static_cast<double>(cut) / static_cast<double>(denom);
  }
  return nonempty ? sum / static_cast<double>(nonempty) : 0.0;
}

// Exhaustive one-to-one matching accuracy (permutations over the padded
// square table).
inline double brute_matching_accuracy(const ContingencyTable& t) {
  const std::size_t s = std::max(t.k_true, t.k_pred);
  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = 0;
  do {
    std::uint64_t mass = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (i < t.k_true && perm[i] < t.k_pred) mass += t.at(i, perm[i]);
    }
    best = std::max(best, mass);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(t.total);
}

}  // namespace agc::testing
