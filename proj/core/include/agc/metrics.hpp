#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agc/csr_graph.hpp"
#include "agc/matrix.hpp"

namespace agc {

struct ContingencyTable {
  std::size_t k_true = 0;
  std::size_t k_pred = 0;
  std::vector<std::uint64_t> counts;  // k_true x k_pred, row-major
  std::vector<std::uint64_t> row_marginals;
  std::vector<std::uint64_t> col_marginals;
  std::uint64_t total = 0;

  std::uint64_t at(std::size_t i, std::size_t j) const { return counts[i * k_pred + j]; }
};

ContingencyTable contingency(const LabelVector& truth, const HardAssignment& pred);

struct HungarianResult {
  double acc = 0.0;
  // matching[j] = true-class index assigned to predicted cluster j, or -1
  std::vector<int> matching;
};

// Optimal one-to-one matching between predicted and true clusters
// maximizing matched mass (Hungarian algorithm on the padded square
// matrix); exact, not greedy.
HungarianResult accuracy_hungarian(const ContingencyTable& table);

double nmi(const ContingencyTable& table);  // arithmetic-mean normalization
double ari(const ContingencyTable& table);
double f1_macro(const ContingencyTable& table, const std::vector<int>& matching);
std::pair<double, double> homogeneity_completeness(const ContingencyTable& table);

// Newman modularity of a hard partition; null-model diagonal included.
double modularity(const CsrGraph& graph, const HardAssignment& pred);

// Mean over non-empty clusters of boundary / (boundary + 2*internal);
// zero-volume clusters contribute 0.
double conductance(const CsrGraph& graph, const HardAssignment& pred);

struct MetricsReport {
  std::optional<double> acc;
  std::optional<double> f1;
  std::optional<double> nmi;
  std::optional<double> ari;
  std::optional<double> homogeneity;
  std::optional<double> completeness;
  double modularity = 0.0;
  double conductance = 0.0;
  std::uint32_t k_pred = 0;
  std::uint32_t k_true = 0;
};

MetricsReport evaluate(const CsrGraph& graph, const HardAssignment& pred,
                       const LabelVector* truth);

// Flat JSON document; metric values only (profiling is reported
// separately so metric files are byte-stable across runs).
std::string metrics_to_json(const MetricsReport& r);

struct AggregateReport {
  // key -> (mean, population sd); insertion-ordered
  std::vector<std::pair<std::string, std::pair<double, double>>> stats;
};

AggregateReport aggregate_metrics(const std::vector<MetricsReport>& runs);
std::string aggregate_to_json(const AggregateReport& r);

}  // namespace agc
