#include <doctest.h>

#include <cmath>
#include <random>

#include "agc/errors.hpp"
#include "agc/smoothing.hpp"
#include "fixtures.hpp"

using namespace agc;

namespace {

FeatureMatrix random_features(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<float> norm(0.0f, 1.0f);
  FeatureMatrix x(n, d);
  for (auto& v : x.data) v = norm(rng);
  return x;
}

}  // namespace

TEST_CASE("hops=0 is the identity filter") {
  std::mt19937_64 rng(1);
  CsrGraph g = testing::barbell();
  FeatureMatrix x = random_features(rng, 6, 4);
  Embedding z = normalized_propagate(g, x, 0);
  CHECK(z.data == x.data);
}

TEST_CASE("one hop on a single self-looped edge averages the rows") {
  CsrGraph g = build_graph({{0, 1}}, 2);
  FeatureMatrix x(2, 2);
  x.at(0, 0) = 1.0f;
  x.at(1, 1) = 1.0f;
  Embedding z = normalized_propagate(g, x, 1, true);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(z.at(i, 0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(z.at(i, 1) == doctest::Approx(0.5).epsilon(1e-6));
  }
}

TEST_CASE("two disjoint triangles: block-constant X is a fixed point") {
  CsrGraph g = build_graph({{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}, 6);
  FeatureMatrix x(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    x.at(i, 0) = i < 3 ? 2.0f : -1.0f;
    x.at(i, 1) = i < 3 ? 0.5f : 3.0f;
  }
  Embedding z = normalized_propagate(g, x, 10, true);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(z.at(i, 0) == doctest::Approx(x.at(i, 0)).epsilon(1e-4));
    CHECK(z.at(i, 1) == doctest::Approx(x.at(i, 1)).epsilon(1e-4));
  }
}

TEST_CASE("propagation shape mismatch is rejected") {
  CsrGraph g = testing::barbell();
  FeatureMatrix x(5, 2);
  CHECK_THROWS_AS((void)normalized_propagate(g, x, 1), ShapeMismatch);
}

TEST_CASE("hop composition: a then b equals a+b") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    CsrGraph g = testing::random_graph(rng, 20, 0.25);
    FeatureMatrix x = random_features(rng, 20, 3);
    Embedding ab = normalized_propagate(g, normalized_propagate(g, x, 2), 3);
    Embedding direct = normalized_propagate(g, x, 5);
    for (std::size_t i = 0; i < ab.data.size(); ++i) {
      CHECK(std::abs(ab.data[i] - direct.data[i]) <=
            1e-4 * std::max(1.0f, std::abs(direct.data[i])));
    }
  }
}

TEST_CASE("sparse propagation matches the dense oracle") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> size(2, 50);
    const std::size_t n = size(rng);
    CsrGraph g = testing::random_graph(rng, n, 0.15);
    FeatureMatrix x = random_features(rng, n, 3);
    for (bool self_loops : {true, false}) {
      Embedding z = normalized_propagate(g, x, 3, self_loops);
      auto oracle = testing::dense_propagate(g, x, 3, self_loops);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          CHECK(std::abs(z.at(i, j) - oracle[i][j]) < 1e-5);
        }
      }
    }
  }
}

TEST_CASE("zero-degree rows propagate to zero without self-loops") {
  CsrGraph g = build_graph({{0, 1}}, 3);
  FeatureMatrix x(3, 2, 1.0f);
  Embedding z = normalized_propagate(g, x, 2, false);
  CHECK(z.at(2, 0) == 0.0f);
  CHECK(z.at(2, 1) == 0.0f);
}

TEST_CASE("isolated node keeps its row with self-loops") {
  CsrGraph g = build_graph({{0, 1}}, 3);
  FeatureMatrix x(3, 2);
  x.at(2, 0) = 4.5f;
  x.at(2, 1) = -2.0f;
  Embedding z = normalized_propagate(g, x, 5, true);
  CHECK(z.at(2, 0) == doctest::Approx(4.5).epsilon(1e-6));
  CHECK(z.at(2, 1) == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("ssgc alpha=1 returns X bit-exactly") {
  std::mt19937_64 rng(6);
  CsrGraph g = testing::barbell();
  FeatureMatrix x = random_features(rng, 6, 5);
  SmoothingConfig cfg{8, 1.0, true, SmoothingVariant::ssgc_average};
  Embedding z = ssgc_smooth(g, x, cfg);
  CHECK(z.data == x.data);
}

TEST_CASE("ssgc alpha=0 hops=1 equals one propagation step") {
  std::mt19937_64 rng(7);
  CsrGraph g = testing::barbell();
  FeatureMatrix x = random_features(rng, 6, 4);
  SmoothingConfig cfg{1, 0.0, true, SmoothingVariant::ssgc_average};
  Embedding z = ssgc_smooth(g, x, cfg);
  Embedding p = normalized_propagate(g, x, 1, true);
  for (std::size_t i = 0; i < z.data.size(); ++i) {
    CHECK(z.data[i] == doctest::Approx(p.data[i]).epsilon(1e-6));
  }
}

TEST_CASE("ssgc hops=0 is rejected") {
  SmoothingConfig cfg{0, 0.5, true, SmoothingVariant::ssgc_average};
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("ssgc one-hop convex combination identity") {
  std::mt19937_64 rng(8);
  CsrGraph g = testing::random_graph(rng, 15, 0.3);
  FeatureMatrix x = random_features(rng, 15, 3);
  const double alpha = 0.3;
  SmoothingConfig cfg{1, alpha, true, SmoothingVariant::ssgc_average};
  Embedding z = ssgc_smooth(g, x, cfg);
  Embedding sx = normalized_propagate(g, x, 1, true);
  for (std::size_t i = 0; i < z.data.size(); ++i) {
    const double expect = alpha * x.data[i] + (1.0 - alpha) * sx.data[i];
    CHECK(z.data[i] == doctest::Approx(expect).epsilon(1e-5));
  }
}

TEST_CASE("ssgc on the barbell matches a dense oracle") {
  CsrGraph g = testing::barbell();
  FeatureMatrix x(6, 6);
  for (std::size_t i = 0; i < 6; ++i) x.at(i, i) = 1.0f;  // one-hot rows
  SmoothingConfig cfg{4, 0.05, true, SmoothingVariant::ssgc_average};
  Embedding z = ssgc_smooth(g, x, cfg);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      double avg = 0.0;
      for (std::uint32_t k = 1; k <= 4; ++k) {
        avg += testing::dense_propagate(g, x, k, true)[i][j];
      }
      const double expect = 0.05 * x.at(i, j) + 0.95 * avg / 4.0;
      CHECK(std::abs(z.at(i, j) - expect) < 1e-5);
    }
  }
}

TEST_CASE("standardize_features column rules") {
  FeatureMatrix x(3, 2);
  x.at(0, 0) = 1.0f;
  x.at(1, 0) = 1.0f;
  x.at(2, 0) = 1.0f;  // constant column
  x.at(0, 1) = 0.0f;
  x.at(1, 1) = 2.0f;
  x.at(2, 1) = 1.0f;
  FeatureMatrix z = standardize_features(x);
  CHECK(z.at(0, 0) == 0.0f);
  CHECK(z.at(1, 0) == 0.0f);
  CHECK(z.at(2, 0) == 0.0f);
  // column mean 1, population std sqrt(2/3)
  const double std1 = std::sqrt(2.0 / 3.0);
  CHECK(z.at(0, 1) == doctest::Approx(-1.0 / std1).epsilon(1e-5));
  CHECK(z.at(1, 1) == doctest::Approx(1.0 / std1).epsilon(1e-5));
}

TEST_CASE("standardize of a two-point column gives -1, 1") {
  FeatureMatrix x(2, 1);
  x.at(0, 0) = 0.0f;
  x.at(1, 0) = 2.0f;
  FeatureMatrix z = standardize_features(x);
  CHECK(z.at(0, 0) == doctest::Approx(-1.0));
  CHECK(z.at(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardize is idempotent up to rounding") {
  std::mt19937_64 rng(9);
  FeatureMatrix x = random_features(rng, 40, 4);
  FeatureMatrix once = standardize_features(x);
  FeatureMatrix twice = standardize_features(once);
  for (std::size_t i = 0; i < once.data.size(); ++i) {
    CHECK(std::abs(once.data[i] - twice.data[i]) < 1e-6);
  }
}
