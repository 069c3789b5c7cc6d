#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace agc {

// Immutable undirected simple graph in CSR form. Neighbor lists are
// sorted and deduplicated, self-loops are dropped at construction, and
// every edge is stored in both directions.
struct CsrGraph {
  std::uint64_t num_nodes = 0;
  std::vector<std::uint64_t> row_ptr;   // len N+1
  std::vector<std::uint64_t> col_idx;   // len 2|E|
  std::vector<std::uint64_t> degrees;   // degrees[i] = row_ptr[i+1] - row_ptr[i]

  std::uint64_t num_edges() const { return col_idx.size() / 2; }

  std::span<const std::uint64_t> neighbors(std::uint64_t u) const {
    return {col_idx.data() + row_ptr[u], col_idx.data() + row_ptr[u + 1]};
  }
};

using EdgeList = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

// Symmetrizes, deduplicates, drops self-loops. Throws InvalidEdge when
// an endpoint is >= num_nodes. Permutation-stable in the input order.
CsrGraph build_graph(const EdgeList& edges, std::uint64_t num_nodes);

// Per-node class ids in [0, k_true).
struct LabelVector {
  std::vector<std::uint32_t> labels;
  std::uint32_t k_true = 0;
};

struct GraphStats {
  double edge_homophily = 0.0;
  double node_homophily = 0.0;
  double avg_degree = 0.0;
};

// Edge homophily: fraction of undirected edges with equal endpoint labels.
// Node homophily: mean over nodes of the same-label neighbor fraction;
// isolated nodes contribute 0.
GraphStats homophily(const CsrGraph& graph, const LabelVector& labels);

}  // namespace agc
