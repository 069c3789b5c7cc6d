#include "agc/sbm.hpp"

#include <cmath>
#include <random>

#include "agc/errors.hpp"

namespace agc {

void SbmSpec::validate() const {
  if (block_sizes.empty()) throw InvalidConfig("sbm: block_sizes is empty");
  for (auto s : block_sizes) {
    if (s < 1) throw InvalidConfig("sbm: block sizes must be >= 1");
  }
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0)) {
    throw InvalidConfig("sbm: requires 0 <= p_out <= p_in <= 1");
  }
}

std::uint64_t SbmSpec::total_nodes() const {
  std::uint64_t n = 0;
  for (auto s : block_sizes) n += s;
  return n;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 over (seed, block-pair) so each pair gets its own stream.
  std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xbf58476d1ce4e5b9ULL);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unrank index t in [0, C(s,2)) to the t-th pair (i,j), i<j, row-major.
std::pair<std::uint64_t, std::uint64_t> unrank_pair(std::uint64_t t, std::uint64_t s) {
  double sd = static_cast<double>(s);
  double disc = (2.0 * sd - 1.0) * (2.0 * sd - 1.0) - 8.0 * static_cast<double>(t);
  auto i = static_cast<std::uint64_t>((2.0 * sd - 1.0 - std::sqrt(disc)) / 2.0);
  auto row_start = [s](std::uint64_t r) { return r * s - r * (r + 1) / 2; };
  while (i > 0 && row_start(i) > t) --i;
  while (row_start(i + 1) <= t) ++i;
  std::uint64_t j = i + 1 + (t - row_start(i));
  return {i, j};
}

// Sample each of num_pairs slots with probability p via geometric skips.
template <typename Emit>
void skip_sample(std::mt19937_64& rng, std::uint64_t num_pairs, double p, Emit emit) {
  if (p <= 0.0 || num_pairs == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t t = 0; t < num_pairs; ++t) emit(t);
    return;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log1mp = std::log1p(-p);
  double t = -1.0;
  for (;;) {
    double u = unif(rng);
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    t += 1.0 + std::floor(std::log(u) / log1mp);
    if (t >= static_cast<double>(num_pairs)) break;
    emit(static_cast<std::uint64_t>(t));
  }
}

constexpr std::uint64_t kBernoulliBlockLimit = 10000;

}  // namespace

std::pair<CsrGraph, LabelVector> generate_sbm(const SbmSpec& spec) {
  spec.validate();
  const std::size_t nb = spec.block_sizes.size();
  std::vector<std::uint64_t> offset(nb + 1, 0);
  for (std::size_t b = 0; b < nb; ++b) offset[b + 1] = offset[b] + spec.block_sizes[b];
  const std::uint64_t n = offset[nb];

  EdgeList edges;
  for (std::size_t a = 0; a < nb; ++a) {
    for (std::size_t b = a; b < nb; ++b) {
      const double p = (a == b) ? spec.p_in : spec.p_out;
      if (p <= 0.0) continue;
      std::mt19937_64 rng(mix_seed(spec.seed, a, b));
      const std::uint64_t sa = spec.block_sizes[a];
      const std::uint64_t sb = spec.block_sizes[b];
      const bool small = sa < kBernoulliBlockLimit && sb < kBernoulliBlockLimit;
      if (a == b) {
        const std::uint64_t pairs = sa * (sa - 1) / 2;
        auto emit = [&](std::uint64_t t) {
          auto [i, j] = unrank_pair(t, sa);
          edges.emplace_back(offset[a] + i, offset[a] + j);
        };
        if (small) {
          std::bernoulli_distribution coin(p);
          std::uint64_t t = 0;
          for (std::uint64_t i = 0; i + 1 < sa; ++i) {
            for (std::uint64_t j = i + 1; j < sa; ++j, ++t) {
              if (coin(rng)) edges.emplace_back(offset[a] + i, offset[a] + j);
            }
          }
          (void)pairs;
        } else {
          skip_sample(rng, pairs, p, emit);
        }
      } else {
        const std::uint64_t pairs = sa * sb;
        if (small) {
          std::bernoulli_distribution coin(p);
          for (std::uint64_t i = 0; i < sa; ++i) {
            for (std::uint64_t j = 0; j < sb; ++j) {
              if (coin(rng)) edges.emplace_back(offset[a] + i, offset[b] + j);
            }
          }
        } else {
          skip_sample(rng, pairs, p, [&](std::uint64_t t) {
            edges.emplace_back(offset[a] + t / sb, offset[b] + t % sb);
          });
        }
        (void)pairs;
      }
    }
  }

  LabelVector labels;
  labels.k_true = static_cast<std::uint32_t>(nb);
  labels.labels.resize(n);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::uint64_t i = offset[b]; i < offset[b + 1]; ++i) {
      labels.labels[i] = static_cast<std::uint32_t>(b);
    }
  }
  return {build_graph(edges, n), std::move(labels)};
}

FeatureMatrix gaussian_features(std::uint64_t n, std::uint64_t d, std::uint64_t seed) {
  FeatureMatrix x(n, d);
  std::mt19937_64 rng(mix_seed(seed, 0x66656174, 0x73));
  std::normal_distribution<float> norm(0.0f, 1.0f);
  for (auto& v : x.data) v = norm(rng);
  return x;
}

FeatureMatrix block_features(const LabelVector& labels, std::uint64_t d,
                             double separation, std::uint64_t seed) {
  const std::uint64_t n = labels.labels.size();
  DenseMatrix<float> means(labels.k_true, d);
  {
    std::mt19937_64 rng(mix_seed(seed, 0x626c6f63, labels.k_true));
    std::normal_distribution<float> norm(0.0f, 1.0f);
    for (auto& v : means.data) v = static_cast<float>(separation) * norm(rng);
  }
  FeatureMatrix x(n, d);
  std::mt19937_64 rng(mix_seed(seed, 0x66656174, 0x626c));
  std::normal_distribution<float> norm(0.0f, 1.0f);
  for (std::uint64_t i = 0; i < n; ++i) {
    const float* mu = means.row(labels.labels[i]);
    float* row = x.row(i);
    for (std::uint64_t j = 0; j < d; ++j) row[j] = mu[j] + norm(rng);
  }
  return x;
}

}  // namespace agc
