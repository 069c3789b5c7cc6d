#include "agc/csr_graph.hpp"

#include <algorithm>
#include <string>

#include "agc/errors.hpp"

namespace agc {

CsrGraph build_graph(const EdgeList& edges, std::uint64_t num_nodes) {
  EdgeList canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw InvalidEdge("edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") has endpoint >= num_nodes=" + std::to_string(num_nodes));
    }
    if (u == v) continue;
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  CsrGraph g;
  g.num_nodes = num_nodes;
  g.row_ptr.assign(num_nodes + 1, 0);
  for (const auto& [u, v] : canon) {
    ++g.row_ptr[u + 1];
    ++g.row_ptr[v + 1];
  }
  for (std::uint64_t i = 0; i < num_nodes; ++i) g.row_ptr[i + 1] += g.row_ptr[i];

  g.col_idx.resize(2 * canon.size());
  std::vector<std::uint64_t> cursor(g.row_ptr.begin(), g.row_ptr.end() - 1);
  // canon is sorted by (min,max); writing both directions in this order
  // leaves each row sorted except for the reverse arcs, so sort rows after.
  for (const auto& [u, v] : canon) {
    g.col_idx[cursor[u]++] = v;
    g.col_idx[cursor[v]++] = u;
  }
  g.degrees.resize(num_nodes);
  for (std::uint64_t i = 0; i < num_nodes; ++i) {
    std::sort(g.col_idx.begin() + g.row_ptr[i], g.col_idx.begin() + g.row_ptr[i + 1]);
    g.degrees[i] = g.row_ptr[i + 1] - g.row_ptr[i];
  }
  return g;
}

GraphStats homophily(const CsrGraph& graph, const LabelVector& labels) {
  if (labels.labels.size() != graph.num_nodes) {
    throw ShapeMismatch("label vector length != num_nodes");
  }
  GraphStats st;
  std::uint64_t same_arcs = 0;
  double node_sum = 0.0;
  for (std::uint64_t u = 0; u < graph.num_nodes; ++u) {
    auto nbrs = graph.neighbors(u);
    if (nbrs.empty()) continue;  // isolated nodes contribute 0
    std::uint64_t same = 0;
    for (std::uint64_t v : nbrs) {
      if (labels.labels[u] == labels.labels[v]) ++same;
    }
    same_arcs += same;
    node_sum += static_cast<double>(same) / static_cast<double>(nbrs.size());
  }
  const std::uint64_t m = graph.num_edges();
  st.edge_homophily = m ? static_cast<double>(same_arcs) / (2.0 * m) : 0.0;
  st.node_homophily = graph.num_nodes ? node_sum / graph.num_nodes : 0.0;
  st.avg_degree = graph.num_nodes ? 2.0 * m / graph.num_nodes : 0.0;
  return st;
}

}  // namespace agc
