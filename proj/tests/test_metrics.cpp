#include <doctest.h>

#include <cmath>
#include <random>

#include "agc/errors.hpp"
#include "agc/metrics.hpp"
#include "fixtures.hpp"

using namespace agc;

namespace {

LabelVector lv(std::vector<std::uint32_t> labels) {
  LabelVector v;
  v.labels = std::move(labels);
  std::uint32_t k = 0;
  for (auto l : v.labels) k = std::max(k, l + 1);
  v.k_true = k;
  return v;
}

HardAssignment ha(std::vector<std::uint32_t> labels) {
  HardAssignment h;
  h.labels = std::move(labels);
  std::uint32_t k = 0;
  for (auto l : h.labels) k = std::max(k, l + 1);
  h.k = k;
  return h;
}

// Entropy-based NMI straight from the contingency definition.
double brute_nmi(const ContingencyTable& t) {
  const double n = static_cast<double>(t.total);
  double hu = 0.0, hv = 0.0, mi = 0.0;
  for (auto c : t.row_marginals) {
    if (c) hu -= c / n * std::log(c / n);
  }
  for (auto c : t.col_marginals) {
    if (c) hv -= c / n * std::log(c / n);
  }
  for (std::size_t i = 0; i < t.k_true; ++i) {
    for (std::size_t j = 0; j < t.k_pred; ++j) {
      const double nij = static_cast<double>(t.at(i, j));
      if (nij == 0.0) continue;
      mi += nij / n *
            std::log(nij * n /
                     (static_cast<double>(t.row_marginals[i]) *
                      static_cast<double>(t.col_marginals[j])));
    }
  }
  // both partitions constant: 0/0 -> 0 by convention
  const double denom = 0.5 * (hu + hv);
  return denom > 0.0 ? mi / denom : 0.0;
}

ContingencyTable random_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> kd(1, 6);
  std::uniform_int_distribution<std::size_t> nd(6, 30);
  const std::size_t kt = kd(rng), kp = kd(rng), n = nd(rng);
  std::uniform_int_distribution<std::uint32_t> tpick(0, static_cast<std::uint32_t>(kt) - 1);
  std::uniform_int_distribution<std::uint32_t> ppick(0, static_cast<std::uint32_t>(kp) - 1);
  std::vector<std::uint32_t> truth(n), pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = tpick(rng);
    pred[i] = ppick(rng);
  }
  return contingency(lv(std::move(truth)), ha(std::move(pred)));
}

}  // namespace

TEST_CASE("contingency table counts and marginals") {
  ContingencyTable t = contingency(lv({0, 0, 1, 1}), ha({0, 1, 1, 1}));
  CHECK(t.k_true == 2);
  CHECK(t.k_pred == 2);
  CHECK(t.total == 4);
  CHECK(t.at(0, 0) == 1);
  CHECK(t.at(0, 1) == 1);
  CHECK(t.at(1, 0) == 0);
  CHECK(t.at(1, 1) == 2);
  CHECK(t.row_marginals == std::vector<std::uint64_t>{2, 2});
  CHECK(t.col_marginals == std::vector<std::uint64_t>{1, 3});
}

TEST_CASE("contingency rejects length mismatch") {
  CHECK_THROWS_AS((void)contingency(lv({0, 1}), ha({0, 1, 0})), ShapeMismatch);
}

TEST_CASE("hungarian accuracy on a permuted perfect clustering") {
  ContingencyTable t = contingency(lv({0, 0, 1, 1, 2, 2}), ha({2, 2, 0, 0, 1, 1}));
  HungarianResult r = accuracy_hungarian(t);
  CHECK(r.acc == doctest::Approx(1.0));
  CHECK(r.matching == std::vector<int>{1, 2, 0});
}

TEST_CASE("hungarian accuracy where greedy matching fails") {
  // table [[4, 3], [0, 4]]: greedy takes (0,1)=3 then (1,0)=0 -> 3/11;
  // optimal is (0,0)+(1,1) = 8/11
  ContingencyTable t;
  t.k_true = 2;
  t.k_pred = 2;
  t.counts = {4, 3, 0, 4};
  t.row_marginals = {7, 4};
  t.col_marginals = {4, 7};
  t.total = 11;
  HungarianResult r = accuracy_hungarian(t);
  CHECK(r.acc == doctest::Approx(8.0 / 11.0));
  CHECK(r.matching == std::vector<int>{0, 1});
}

TEST_CASE("hungarian with more predicted clusters than true ones") {
  // 6 points, 2 classes, 3 predicted clusters; best matching covers 4
  ContingencyTable t = contingency(lv({0, 0, 0, 1, 1, 1}), ha({0, 0, 1, 1, 2, 2}));
  HungarianResult r = accuracy_hungarian(t);
  CHECK(r.acc == doctest::Approx(4.0 / 6.0));
  // one predicted cluster stays unmatched
  int unmatched = 0;
  for (int m : r.matching) unmatched += m < 0;
  CHECK(unmatched == 1);
}

TEST_CASE("hungarian matches exhaustive search on random tables") {
  std::mt19937_64 rng(201);
  for (int t = 0; t < 200; ++t) {
    ContingencyTable table = random_table(rng);
    HungarianResult r = accuracy_hungarian(table);
    CHECK(r.acc == doctest::Approx(testing::brute_matching_accuracy(table)).epsilon(1e-12));
  }
}

TEST_CASE("nmi of identical and independent partitions") {
  ContingencyTable perfect = contingency(lv({0, 0, 1, 1}), ha({1, 1, 0, 0}));
  CHECK(nmi(perfect) == doctest::Approx(1.0));
  // orthogonal split: labels and predictions are independent
  ContingencyTable indep = contingency(lv({0, 0, 1, 1}), ha({0, 1, 0, 1}));
  CHECK(nmi(indep) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("nmi matches the entropy oracle") {
  ContingencyTable t;
  t.k_true = 2;
  t.k_pred = 2;
  t.counts = {3, 1, 0, 4};
  t.row_marginals = {4, 4};
  t.col_marginals = {3, 5};
  t.total = 8;
  CHECK(nmi(t) == doctest::Approx(brute_nmi(t)).epsilon(1e-12));
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 100; ++trial) {
    ContingencyTable table = random_table(rng);
    CHECK(nmi(table) == doctest::Approx(brute_nmi(table)).epsilon(1e-10));
  }
}

TEST_CASE("single-cluster degenerate nmi") {
  // both partitions trivial: 0/0 -> 0 by convention
  CHECK(nmi(contingency(lv({0, 0, 0}), ha({0, 0, 0}))) == doctest::Approx(0.0));
}

TEST_CASE("ari fixed values") {
  CHECK(ari(contingency(lv({0, 0, 1, 1}), ha({1, 1, 0, 0}))) == doctest::Approx(1.0));
  // classic anti-correlated example
  CHECK(ari(contingency(lv({0, 0, 1, 1}), ha({0, 1, 0, 1}))) == doctest::Approx(-0.5));
  // expected index equals the index for a trivial prediction
  CHECK(ari(contingency(lv({0, 0, 1, 1}), ha({0, 0, 0, 0}))) == doctest::Approx(0.0));
}

TEST_CASE("ari is symmetric in its arguments") {
  std::mt19937_64 rng(223);
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<std::uint32_t> pick(0, 3);
    std::vector<std::uint32_t> a(20), b(20);
    for (std::size_t i = 0; i < 20; ++i) {
      a[i] = pick(rng);
      b[i] = pick(rng);
    }
    const double fwd = ari(contingency(lv(a), ha(b)));
    const double rev = ari(contingency(lv(b), ha(a)));
    CHECK(fwd == doctest::Approx(rev).epsilon(1e-12));
  }
}

TEST_CASE("macro f1 under the optimal matching") {
  // truth {0,0,1,1}, pred {0,1,1,1}: matching is identity.
  // class 0: tp=1 fp=0 fn=1 -> f1 = 2/3
  // class 1: tp=2 fp=1 fn=0 -> f1 = 4/5
  ContingencyTable t = contingency(lv({0, 0, 1, 1}), ha({0, 1, 1, 1}));
  HungarianResult r = accuracy_hungarian(t);
  CHECK(f1_macro(t, r.matching) == doctest::Approx((2.0 / 3.0 + 4.0 / 5.0) / 2.0));
}

TEST_CASE("macro f1 is 1 on a relabeled perfect clustering") {
  ContingencyTable t = contingency(lv({0, 0, 1, 1, 2}), ha({2, 2, 0, 0, 1}));
  HungarianResult r = accuracy_hungarian(t);
  CHECK(f1_macro(t, r.matching) == doctest::Approx(1.0));
}

TEST_CASE("homogeneity and completeness asymmetry") {
  // predicted singletons: perfectly homogeneous, poorly complete
  ContingencyTable t = contingency(lv({0, 0, 1, 1}), ha({0, 1, 2, 3}));
  auto [h, c] = homogeneity_completeness(t);
  CHECK(h == doctest::Approx(1.0));
  CHECK(c < 1.0);
  // one predicted blob: complete but not homogeneous
  ContingencyTable t2 = contingency(lv({0, 0, 1, 1}), ha({0, 0, 0, 0}));
  auto [h2, c2] = homogeneity_completeness(t2);
  CHECK(h2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c2 == doctest::Approx(1.0));
}

TEST_CASE("homogeneity/completeness swap under transposition") {
  std::mt19937_64 rng(227);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<std::uint32_t> pick(0, 2);
    std::vector<std::uint32_t> a(15), b(15);
    for (std::size_t i = 0; i < 15; ++i) {
      a[i] = pick(rng);
      b[i] = pick(rng);
    }
    auto [h1, c1] = homogeneity_completeness(contingency(lv(a), ha(b)));
    auto [h2, c2] = homogeneity_completeness(contingency(lv(b), ha(a)));
    CHECK(h1 == doctest::Approx(c2).epsilon(1e-10));
    CHECK(c1 == doctest::Approx(h2).epsilon(1e-10));
  }
}

TEST_CASE("barbell modularity and conductance fixed values") {
  CsrGraph g = testing::barbell();
  HardAssignment part = testing::barbell_partition();
  CHECK(modularity(g, part) == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  CHECK(conductance(g, part) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("modularity of the trivial single cluster is 0") {
  CsrGraph g = testing::barbell();
  CHECK(modularity(g, ha({0, 0, 0, 0, 0, 0})) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("modularity of all-singleton clusters") {
  CsrGraph g = testing::barbell();
  // Q = -sum_u (d_u/2m)^2
  double expect = 0.0;
  for (auto d : g.degrees) expect -= (d / 14.0) * (d / 14.0);
  CHECK(modularity(g, ha({0, 1, 2, 3, 4, 5})) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("modularity matches the O(N^2) oracle on random graphs") {
  std::mt19937_64 rng(229);
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<std::size_t> nd(4, 40);
    const std::size_t n = nd(rng);
    CsrGraph g = testing::random_graph(rng, n, 0.2);
    if (g.num_edges() == 0) continue;
    HardAssignment part = testing::random_partition(rng, n, 4);
    CHECK(modularity(g, part) ==
          doctest::Approx(testing::brute_modularity(g, part)).epsilon(1e-10));
  }
}

TEST_CASE("conductance matches the enumeration oracle on random graphs") {
  std::mt19937_64 rng(233);
  for (int t = 0; t < 30; ++t) {
    std::uniform_int_distribution<std::size_t> nd(4, 40);
    const std::size_t n = nd(rng);
    CsrGraph g = testing::random_graph(rng, n, 0.2);
    if (g.num_edges() == 0) continue;
    HardAssignment part = testing::random_partition(rng, n, 3);
    CHECK(conductance(g, part) ==
          doctest::Approx(testing::brute_conductance(g, part)).epsilon(1e-12));
  }
}

TEST_CASE("conductance of a fully internal partition is 0") {
  CsrGraph g = build_graph({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}, 6);
  CHECK(conductance(g, ha({0, 0, 0, 1, 1, 1})) == doctest::Approx(0.0));
}

TEST_CASE("metrics are invariant to predicted-label permutation") {
  std::mt19937_64 rng(239);
  CsrGraph g = testing::random_graph(rng, 25, 0.25);
  LabelVector truth = lv(testing::random_partition(rng, 25, 3).labels);
  HardAssignment pred = testing::random_partition(rng, 25, 3);
  HardAssignment perm = pred;
  for (auto& l : perm.labels) l = (l + 1) % 3;
  MetricsReport a = evaluate(g, pred, &truth);
  MetricsReport b = evaluate(g, perm, &truth);
  CHECK(*a.acc == doctest::Approx(*b.acc).epsilon(1e-12));
  CHECK(*a.nmi == doctest::Approx(*b.nmi).epsilon(1e-12));
  CHECK(*a.ari == doctest::Approx(*b.ari).epsilon(1e-12));
  CHECK(a.modularity == doctest::Approx(b.modularity).epsilon(1e-12));
  CHECK(a.conductance == doctest::Approx(b.conductance).epsilon(1e-12));
}

TEST_CASE("evaluate composes the full report") {
  CsrGraph g = testing::barbell();
  LabelVector truth = lv({0, 0, 0, 1, 1, 1});
  HardAssignment pred = ha({1, 1, 1, 0, 0, 0});
  MetricsReport r = evaluate(g, pred, &truth);
  REQUIRE(r.acc.has_value());
  CHECK(*r.acc == doctest::Approx(1.0));
  CHECK(*r.nmi == doctest::Approx(1.0));
  CHECK(*r.ari == doctest::Approx(1.0));
  CHECK(*r.f1 == doctest::Approx(1.0));
  CHECK(r.modularity == doctest::Approx(5.0 / 14.0));
  CHECK(r.conductance == doctest::Approx(1.0 / 7.0));
  CHECK(r.k_pred == 2);
  CHECK(r.k_true == 2);
}

TEST_CASE("evaluate without ground truth leaves label metrics absent") {
  CsrGraph g = testing::barbell();
  MetricsReport r = evaluate(g, testing::barbell_partition(), nullptr);
  CHECK_FALSE(r.acc.has_value());
  CHECK_FALSE(r.nmi.has_value());
  CHECK(r.modularity == doctest::Approx(5.0 / 14.0));
}

TEST_CASE("evaluate counts only non-empty predicted clusters") {
  CsrGraph g = testing::barbell();
  HardAssignment pred{{0, 0, 0, 3, 3, 3}, 4};  // clusters 1, 2 empty
  MetricsReport r = evaluate(g, pred, nullptr);
  CHECK(r.k_pred == 2);
}

TEST_CASE("metrics_to_json layout") {
  CsrGraph g = testing::barbell();
  LabelVector truth = lv({0, 0, 0, 1, 1, 1});
  MetricsReport r = evaluate(g, testing::barbell_partition(), &truth);
  std::string json = metrics_to_json(r);
  CHECK(json.find("\"acc\": 1") != std::string::npos);
  CHECK(json.find("\"modularity\": 0.357142857143") != std::string::npos);
  CHECK(json.find("\"k_pred\": 2") != std::string::npos);
  CHECK(json.find("seconds") == std::string::npos);

  MetricsReport unlabeled = evaluate(g, testing::barbell_partition(), nullptr);
  std::string json2 = metrics_to_json(unlabeled);
  CHECK(json2.find("\"acc\": null") != std::string::npos);
}

TEST_CASE("aggregate_metrics mean and population sd") {
  CsrGraph g = testing::barbell();
  MetricsReport a = evaluate(g, testing::barbell_partition(), nullptr);
  MetricsReport b = a;
  a.modularity = 0.2;
  b.modularity = 0.4;
  AggregateReport agg = aggregate_metrics({a, b});
  bool found = false;
  for (const auto& [key, stat] : agg.stats) {
    if (key == "modularity") {
      found = true;
      CHECK(stat.first == doctest::Approx(0.3).epsilon(1e-12));
      CHECK(stat.second == doctest::Approx(0.1).epsilon(1e-12));
    }
  }
  CHECK(found);
  // no labeled metrics -> acc absent from the aggregate
  for (const auto& [key, stat] : agg.stats) CHECK(key != "acc");
}
