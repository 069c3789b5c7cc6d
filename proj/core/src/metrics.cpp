#include "agc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "agc/errors.hpp"

namespace agc {

ContingencyTable contingency(const LabelVector& truth, const HardAssignment& pred) {
  if (truth.labels.size() != pred.labels.size()) {
    throw ShapeMismatch("contingency: partition length mismatch");
  }
  if (truth.labels.empty()) throw ShapeMismatch("contingency: empty partitions");
  ContingencyTable t;
  t.k_true = truth.k_true;
  t.k_pred = pred.k;
  for (auto l : truth.labels) t.k_true = std::max<std::size_t>(t.k_true, l + 1);
  for (auto l : pred.labels) t.k_pred = std::max<std::size_t>(t.k_pred, l + 1);
  t.counts.assign(t.k_true * t.k_pred, 0);
  for (std::size_t i = 0; i < truth.labels.size(); ++i) {
    ++t.counts[truth.labels[i] * t.k_pred + pred.labels[i]];
  }
  t.row_marginals.assign(t.k_true, 0);
  t.col_marginals.assign(t.k_pred, 0);
  for (std::size_t i = 0; i < t.k_true; ++i) {
    for (std::size_t j = 0; j < t.k_pred; ++j) {
      t.row_marginals[i] += t.at(i, j);
      t.col_marginals[j] += t.at(i, j);
    }
  }
  t.total = truth.labels.size();
  return t;
}

namespace {

// Potentials-based Hungarian algorithm on an s x s cost matrix
// (minimization). Returns assignment row -> column.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  const int s = static_cast<int>(cost.size());
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0);
  std::vector<int> p(s + 1, 0), way(s + 1, 0);
  for (int i = 1; i <= s; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(s + 1, INF);
    std::vector<char> used(s + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = INF;
      for (int j = 1; j <= s; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= s; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(s, -1);
  for (int j = 1; j <= s; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

double xlogy_ratio(double x, double num, double den) {
  // x * ln(num/den), 0 when x = 0
  return x > 0.0 ? x * std::log(num / den) : 0.0;
}

}  // namespace

HungarianResult accuracy_hungarian(const ContingencyTable& table) {
  const std::size_t s = std::max(table.k_true, table.k_pred);
  std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < table.k_true; ++i) {
    for (std::size_t j = 0; j < table.k_pred; ++j) {
      cost[i][j] = -static_cast<double>(table.at(i, j));
    }
  }
  const std::vector<int> row_to_col = hungarian_min(cost);
  HungarianResult res;
  res.matching.assign(table.k_pred, -1);
  std::uint64_t matched = 0;
  for (std::size_t i = 0; i < table.k_true; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && static_cast<std::size_t>(j) < table.k_pred) {
      res.matching[j] = static_cast<int>(i);
      matched += table.at(i, j);
    }
  }
  res.acc = static_cast<double>(matched) / static_cast<double>(table.total);
  return res;
}

double nmi(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total);
  double mi = 0.0, ht = 0.0, hp = 0.0;
  for (std::size_t i = 0; i < table.k_true; ++i) {
    for (std::size_t j = 0; j < table.k_pred; ++j) {
      const double nij = static_cast<double>(table.at(i, j));
      if (nij == 0.0) continue;
      mi += xlogy_ratio(nij / n, nij * n,
                        static_cast<double>(table.row_marginals[i]) *
                            static_cast<double>(table.col_marginals[j]));
    }
  }
  for (auto a : table.row_marginals) ht -= xlogy_ratio(a / n, static_cast<double>(a), n);
  for (auto b : table.col_marginals) hp -= xlogy_ratio(b / n, static_cast<double>(b), n);
  const double denom = 0.5 * (ht + hp);
  if (denom <= 0.0) return 0.0;  // both partitions constant
  return mi / denom;
}

double ari(const ContingencyTable& table) {
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (auto c : table.counts) sum_ij += choose2(static_cast<double>(c));
  for (auto a : table.row_marginals) sum_a += choose2(static_cast<double>(a));
  for (auto b : table.col_marginals) sum_b += choose2(static_cast<double>(b));
  const double pairs = choose2(static_cast<double>(table.total));
  if (pairs == 0.0) return 0.0;
  const double expected = sum_a * sum_b / pairs;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 0.0;
  return (sum_ij - expected) / (max_index - expected);
}

double f1_macro(const ContingencyTable& table, const std::vector<int>& matching) {
  std::vector<int> class_to_pred(table.k_true, -1);
  for (std::size_t j = 0; j < matching.size(); ++j) {
    if (matching[j] >= 0) class_to_pred[matching[j]] = static_cast<int>(j);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < table.k_true; ++i) {
    const int j = class_to_pred[i];
    if (j < 0) continue;  // unmatched true class scores 0
    const double tp = static_cast<double>(table.at(i, j));
    const double pred_n = static_cast<double>(table.col_marginals[j]);
    const double true_n = static_cast<double>(table.row_marginals[i]);
    if (tp == 0.0 || pred_n == 0.0 || true_n == 0.0) continue;
    const double prec = tp / pred_n;
    const double rec = tp / true_n;
    sum += 2.0 * prec * rec / (prec + rec);
  }
  return sum / static_cast<double>(table.k_true);
}

std::pair<double, double> homogeneity_completeness(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total);
  double ht = 0.0, hp = 0.0, ht_given_p = 0.0, hp_given_t = 0.0;
  for (auto a : table.row_marginals) ht -= xlogy_ratio(a / n, static_cast<double>(a), n);
  for (auto b : table.col_marginals) hp -= xlogy_ratio(b / n, static_cast<double>(b), n);
  for (std::size_t i = 0; i < table.k_true; ++i) {
    for (std::size_t j = 0; j < table.k_pred; ++j) {
      const double nij = static_cast<double>(table.at(i, j));
      if (nij == 0.0) continue;
      ht_given_p -= xlogy_ratio(nij / n, nij, static_cast<double>(table.col_marginals[j]));
      hp_given_t -= xlogy_ratio(nij / n, nij, static_cast<double>(table.row_marginals[i]));
    }
  }
  const double homo = ht > 0.0 ? 1.0 - ht_given_p / ht : 1.0;
  const double comp = hp > 0.0 ? 1.0 - hp_given_t / hp : 1.0;
  return {homo, comp};
}

double modularity(const CsrGraph& graph, const HardAssignment& pred) {
  if (pred.labels.size() != graph.num_nodes) {
    throw ShapeMismatch("modularity: assignment length != num_nodes");
  }
  const double two_m = static_cast<double>(graph.col_idx.size());
  if (two_m == 0.0) throw EmptyGraph("modularity: graph has no edges");
  std::size_t k = pred.k;
  for (auto l : pred.labels) k = std::max<std::size_t>(k, l + 1);
  std::vector<std::uint64_t> internal_arcs(k, 0), volume(k, 0);
  for (std::uint64_t u = 0; u < graph.num_nodes; ++u) {
    const auto cu = pred.labels[u];
    volume[cu] += graph.degrees[u];
    for (std::uint64_t v : graph.neighbors(u)) {
      if (pred.labels[v] == cu) ++internal_arcs[cu];
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double e = static_cast<double>(internal_arcs[c]);
    const double vol = static_cast<double>(volume[c]);
    q += e / two_m - (vol / two_m) * (vol / two_m);
  }
  return q;
}

double conductance(const CsrGraph& graph, const HardAssignment& pred) {
  if (pred.labels.size() != graph.num_nodes) {
    throw ShapeMismatch("conductance: assignment length != num_nodes");
  }
  std::size_t k = pred.k;
  for (auto l : pred.labels) k = std::max<std::size_t>(k, l + 1);
  std::vector<std::uint64_t> cut(k, 0), volume(k, 0), members(k, 0);
  for (std::uint64_t u = 0; u < graph.num_nodes; ++u) {
    const auto cu = pred.labels[u];
    ++members[cu];
    volume[cu] += graph.degrees[u];
    for (std::uint64_t v : graph.neighbors(u)) {
      if (pred.labels[v] != cu) ++cut[cu];
    }
  }
  double sum = 0.0;
  std::size_t nonempty = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c] == 0) continue;
    ++nonempty;
    if (volume[c] > 0) {
      sum += static_cast<double>(cut[c]) / static_cast<double>(volume[c]);
    }
  }
  return nonempty ? sum / static_cast<double>(nonempty) : 0.0;
}

MetricsReport evaluate(const CsrGraph& graph, const HardAssignment& pred,
                       const LabelVector* truth) {
  MetricsReport r;
  r.modularity = modularity(graph, pred);
  r.conductance = conductance(graph, pred);
  std::size_t kp = 0;
  {
    std::vector<std::uint64_t> members(std::max<std::size_t>(pred.k, 1), 0);
    for (auto l : pred.labels) {
      if (l >= members.size()) members.resize(l + 1, 0);
      ++members[l];
    }
    for (auto m : members) kp += m > 0;
  }
  r.k_pred = static_cast<std::uint32_t>(kp);
  if (truth) {
    ContingencyTable t = contingency(*truth, pred);
    HungarianResult h = accuracy_hungarian(t);
    r.acc = h.acc;
    r.f1 = f1_macro(t, h.matching);
    r.nmi = nmi(t);
    r.ari = ari(t);
    auto [homo, comp] = homogeneity_completeness(t);
    r.homogeneity = homo;
    r.completeness = comp;
    r.k_true = static_cast<std::uint32_t>(t.k_true);
  }
  return r;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(std::string& out, const char* key, const std::optional<double>& v,
          bool& first) {
  if (!first) out += ", ";
  first = false;
  out += "\"";
  out += key;
  out += "\": ";
  out += v ? fmt_num(*v) : "null";
}

}  // namespace

std::string metrics_to_json(const MetricsReport& r) {
  std::string out = "{";
  bool first = true;
  emit(out, "acc", r.acc, first);
  emit(out, "nmi", r.nmi, first);
  emit(out, "ari", r.ari, first);
  emit(out, "f1", r.f1, first);
  emit(out, "homogeneity", r.homogeneity, first);
  emit(out, "completeness", r.completeness, first);
  emit(out, "modularity", r.modularity, first);
  emit(out, "conductance", r.conductance, first);
  emit(out, "k_pred", static_cast<double>(r.k_pred), first);
  emit(out, "k_true", static_cast<double>(r.k_true), first);
  out += "}\n";
  return out;
}

AggregateReport aggregate_metrics(const std::vector<MetricsReport>& runs) {
  AggregateReport agg;
  auto add = [&](const std::string& key, auto getter) {
    std::vector<double> vals;
    for (const auto& r : runs) {
      auto v = getter(r);
      if (!v) return;  // only aggregate metrics present in every run
      vals.push_back(*v);
    }
    if (vals.empty()) return;
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= vals.size();  // population SD
    agg.stats.emplace_back(key, std::make_pair(mean, std::sqrt(var)));
  };
  add("acc", [](const MetricsReport& r) { return r.acc; });
  add("nmi", [](const MetricsReport& r) { return r.nmi; });
  add("ari", [](const MetricsReport& r) { return r.ari; });
  add("f1", [](const MetricsReport& r) { return r.f1; });
  add("homogeneity", [](const MetricsReport& r) { return r.homogeneity; });
  add("completeness", [](const MetricsReport& r) { return r.completeness; });
  add("modularity",
      [](const MetricsReport& r) { return std::optional<double>(r.modularity); });
  add("conductance",
      [](const MetricsReport& r) { return std::optional<double>(r.conductance); });
  return agg;
}

std::string aggregate_to_json(const AggregateReport& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, ms] : r.stats) {
    if (!first) out += ", ";
    first = false;
    out += "\"" + key + "\": {\"mean\": " + fmt_num(ms.first) +
           ", \"sd\": " + fmt_num(ms.second) + "}";
  }
  out += "}\n";
  return out;
}

}  // namespace agc
