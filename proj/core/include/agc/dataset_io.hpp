#pragma once

#include <filesystem>
#include <optional>

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"

namespace agc {

struct Dataset {
  CsrGraph graph;
  FeatureMatrix features;
  std::optional<LabelVector> labels;
};

// Directory layout:
//   graph.meta    key=value lines (num_nodes, num_edges, directed=false)
//   edges.tsv     one undirected edge per line, u<TAB>v with u < v
//   features.bin  magic AGCF, u64 N, u64 D, N*D float32 row-major
//                 (features.csv accepted as fallback)
//   labels.tsv    optional, one integer per line
Dataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const std::filesystem::path& dir, const Dataset& ds);

// Dense float matrix in the features.bin layout; `magic` is AGCF for raw
// features and AGCZ for smoothed embeddings.
void write_matrix(const std::filesystem::path& path, const FeatureMatrix& m,
                  const char* magic = "AGCF");
FeatureMatrix read_matrix(const std::filesystem::path& path, const char* magic);

void write_assignments(const std::filesystem::path& path, const HardAssignment& a);
HardAssignment read_assignments(const std::filesystem::path& path);

}  // namespace agc
